"""Finite fields F_{p^n} as integer codes with precomputed numpy tables."""

from __future__ import annotations
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Tuple

import numpy as np
from sympy import Poly, isprime, symbols

from .errors import PNotPrime, PreconditionViolated

_X = symbols("x")


def least_irreducible(p: int, n: int) -> Tuple[int, ...]:
    """Least monic irreducible of degree n over F_p, by integer code of its lower coefficients.

    Returned as coefficients c_0 .. c_{n-1} of x^n + c_{n-1} x^{n-1} + ... + c_0.
    """
    for code in range(p**n):
        low = [(code // p**i) % p for i in range(n)]
        if n > 1 and low[0] == 0:
            continue
        if Poly([1] + low[::-1], _X, modulus=p).is_irreducible:
            return tuple(low)
    raise PreconditionViolated(f"no irreducible polynomial of degree {n} over F_{p}")


class GaloisField:
    """F_{p^n}. Element code c has base-p digits c_0, c_1, ... as polynomial coefficients."""

    def __init__(self, p: int, n: int = 1) -> None:
        if not isinstance(p, int) or not isprime(p):
            raise PNotPrime(f"{p!r} is not a prime")
        if n < 1:
            raise PreconditionViolated("field degree must be >= 1")
        self.p = p
        self.n = n
        self.order = p**n
        self.modulus = least_irreducible(p, n)
        self._powers = p ** np.arange(n, dtype=np.int64)
        self.digits = (np.arange(self.order)[:, None] // self._powers[None, :]) % p

    def encode(self, digits: np.ndarray) -> np.ndarray:
        return (np.asarray(digits) % self.p) @ self._powers

    @cached_property
    def add(self) -> np.ndarray:
        d = self.digits
        return self.encode(d[:, None, :] + d[None, :, :])

    @cached_property
    def neg(self) -> np.ndarray:
        return self.encode(-self.digits)

    @cached_property
    def _x_powers(self) -> np.ndarray:
        """Matrices of multiplication by x^i on row vectors of digits."""
        p, n = self.p, self.n
        companion = np.zeros((n, n), dtype=np.int64)
        for j in range(n - 1):
            companion[j, j + 1] = 1
        companion[n - 1] = [(-c) % p for c in self.modulus]
        out = np.zeros((n, n, n), dtype=np.int64)
        out[0] = np.eye(n, dtype=np.int64)
        for i in range(1, n):
            out[i] = (out[i - 1] @ companion) % p
        return out

    @cached_property
    def mul(self) -> np.ndarray:
        mats = np.einsum("bi,ijk->bjk", self.digits, self._x_powers) % self.p
        return self.encode(np.einsum("aj,bjk->abk", self.digits, mats))

    @cached_property
    def inv(self) -> np.ndarray:
        inv = np.zeros(self.order, dtype=np.int64)
        inv[1:] = np.argmax(self.mul[1:] == 1, axis=1)
        return inv

    def power(self, a: int, k: int) -> int:
        if a == 0:
            return 0 if k > 0 else 1
        k %= self.order - 1
        out, base = 1, int(a)
        while k:
            if k & 1:
                out = int(self.mul[out, base])
            base = int(self.mul[base, base])
            k >>= 1
        return out

    def multiplicative_order(self, a: int) -> int:
        if a == 0:
            raise PreconditionViolated("zero has no multiplicative order")
        k, x = 1, int(a)
        while x != 1:
            x = int(self.mul[x, a])
            k += 1
        return k

    @cached_property
    def primitive(self) -> int:
        """Least code generating the multiplicative group."""
        return next(a for a in range(1, self.order) if self.multiplicative_order(a) == self.order - 1)

    def frobenius(self, i: int = 1) -> np.ndarray:
        """The map x -> x^(p^i) as a table over codes."""
        e = self.p**i
        return np.asarray([self.power(a, e) for a in range(self.order)], dtype=np.int64)

    def element(self, code: int) -> "FieldElement":
        return FieldElement(self, int(code))

    def from_coefficients(self, coefficients: Sequence[int]) -> "FieldElement":
        if len(coefficients) != self.n:
            raise PreconditionViolated(f"expected {self.n} coefficients")
        return FieldElement(self, int(self.encode(np.asarray(coefficients))))

    def __repr__(self) -> str:
        return f"GaloisField({self.p}, {self.n})"


@dataclass(frozen=True)
class FieldElement:
    field: GaloisField
    code: int

    @property
    def coefficients(self) -> Tuple[int, ...]:
        return tuple(int(c) for c in self.field.digits[self.code])

    def _other(self, other: "FieldElement") -> int:
        if other.field is not self.field:
            raise PreconditionViolated("elements of different fields")
        return other.code

    def __add__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.field, int(self.field.add[self.code, self._other(other)]))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        return self + (-other)

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, int(self.field.neg[self.code]))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.field, int(self.field.mul[self.code, self._other(other)]))

    def inverse(self) -> "FieldElement":
        if self.code == 0:
            raise ZeroDivisionError("zero has no inverse")
        return FieldElement(self.field, int(self.field.inv[self.code]))

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        return self * other.inverse()

    def __pow__(self, k: int) -> "FieldElement":
        if k < 0:
            return self.inverse() ** (-k)
        return FieldElement(self.field, self.field.power(self.code, k))

    def is_zero(self) -> bool:
        return self.code == 0
