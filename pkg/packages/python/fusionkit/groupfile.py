from __future__ import annotations
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

from .errors import GroupFormatError, InvalidPermutation
from .group import GroupTable, enumerate_group
from .perm import Permutation


def parse_group_file(text: str) -> Tuple[int, List[Permutation]]:
    """Parse the group text format into (degree, generators).

    Line 1 is the degree; every further non-empty line not starting with `#`
    is one generator, as 1-based images or in cycle notation.
    """
    degree: Optional[int] = None
    gens: List[Permutation] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if degree is None:
            try:
                degree = int(line)
            except ValueError:
                raise GroupFormatError(f"degree must be an integer, got {line!r}", line=lineno)
            if degree < 1:
                raise GroupFormatError("degree must be positive", line=lineno)
            continue
        try:
            gens.append(Permutation.parse(line, degree))
        except InvalidPermutation as e:
            raise GroupFormatError(e.detail or e.code, line=lineno)
    if degree is None:
        raise GroupFormatError("missing degree line", line=1)
    return degree, gens


def load_group_file(path: Union[str, Path], cap: Optional[int] = None) -> GroupTable:
    degree, gens = parse_group_file(Path(path).read_text(encoding="utf-8"))
    return enumerate_group(degree, gens, cap=cap)


def format_group_file(degree: int, generators: Sequence[Permutation], comment: Optional[str] = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(str(degree))
    lines.extend(g.to_cycle_string() for g in generators)
    return "\n".join(lines) + "\n"
