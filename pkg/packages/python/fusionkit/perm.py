from __future__ import annotations
from dataclasses import dataclass
from math import lcm
from typing import Iterable, List, Sequence, Tuple
import re

from .errors import InvalidPermutation

_CYCLE = re.compile(r"\(([^()]*)\)")


@dataclass(frozen=True)
class Permutation:
    """A bijection of {0, ..., degree-1}; images[i] is the image of point i.

    Products read left to right: (a * b)(i) = b(a(i)).
    """

    images: Tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.images)
        if n == 0:
            raise InvalidPermutation("DEGREE_ZERO")
        if sorted(self.images) != list(range(n)):
            raise InvalidPermutation(f"not a bijection on 0..{n - 1}: {list(self.images)}")

    @property
    def degree(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(tuple(range(degree)))

    @classmethod
    def from_images(cls, images: Iterable[int]) -> "Permutation":
        return cls(tuple(int(x) for x in images))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        images = list(range(degree))
        seen: set[int] = set()
        for cyc in cycles:
            for x in cyc:
                if not 0 <= x < degree:
                    raise InvalidPermutation(f"point {x} outside 0..{degree - 1}")
                if x in seen:
                    raise InvalidPermutation(f"point {x} repeated across cycles")
                seen.add(x)
            for i, x in enumerate(cyc):
                images[x] = cyc[(i + 1) % len(cyc)]
        return cls(tuple(images))

    @classmethod
    def parse(cls, text: str, degree: int) -> "Permutation":
        """Parse 1-based cycle notation `(1 2 3)(4 5)` or a list of 1-based images."""
        s = text.strip()
        if s.startswith("("):
            if _CYCLE.sub("", s).strip():
                raise InvalidPermutation(f"malformed cycle notation: {text!r}")
            cycles: List[List[int]] = []
            for body in _CYCLE.findall(s):
                parts = body.replace(",", " ").split()
                try:
                    cycles.append([int(x) - 1 for x in parts])
                except ValueError:
                    raise InvalidPermutation(f"non-integer point in {text!r}")
            return cls.from_cycles(degree, cycles)
        parts = s.replace(",", " ").split()
        try:
            images = [int(x) - 1 for x in parts]
        except ValueError:
            raise InvalidPermutation(f"non-integer image in {text!r}")
        if len(images) != degree:
            raise InvalidPermutation(f"expected {degree} images, got {len(images)}")
        return cls(tuple(images))

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.degree != self.degree:
            raise InvalidPermutation("DEGREE_MISMATCH")
        return Permutation(tuple(other.images[x] for x in self.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, x in enumerate(self.images):
            inv[x] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def cycles(self) -> List[Tuple[int, ...]]:
        seen = [False] * self.degree
        out: List[Tuple[int, ...]] = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = []
            x = start
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = self.images[x]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return lcm(1, *(len(c) for c in self.cycles()))

    def to_cycle_string(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(str(x + 1) for x in c) + ")" for c in cyc)

    def __str__(self) -> str:
        return self.to_cycle_string()
