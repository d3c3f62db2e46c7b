from __future__ import annotations
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union
import json
import logging

import numpy as np
from sympy import isprime

from .constants import AGL_MAX_FIELD, SubgroupFilters, max_order
from .control import compare_family, thm1_hypothesis, HypothesisWitness
from .errors import CapExceeded, ClaimFailed, GroupFormatError, PNotPrime, PreconditionViolated
from .field import GaloisField
from .fusion import FusionDiff, fusion_equal, hom_images
from .group import (
    GroupTable,
    SubgroupHandle,
    center,
    commutator_subgroup,
    enumerate_group,
    extend_subgroup,
    is_elementary_abelian,
    normalizer,
    quotient,
    reindex,
    subgroup_from_indices,
)
from .groupfile import load_group_file
from .perm import Permutation
from .pstructure import enumerate_subgroups, focal_subgroup, hyperfocal_puig, is_p_nilpotent, sylow_p

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AglFamily:
    """x -> a*x^(p^i) + b on F_{p^n}: G (all i), H (i = 0), S (translations), D (x -> a*x)."""

    p: int
    n: int
    field: GaloisField
    G: GroupTable
    H: SubgroupHandle
    S: SubgroupHandle
    D: SubgroupHandle
    sigma: int

    def __iter__(self) -> Iterator[Any]:
        return iter((self.G, self.H, self.S))


def build_agl_family(p: int, n: int, cap: Optional[int] = None) -> AglFamily:
    if not isinstance(p, int) or not isprime(p):
        raise PreconditionViolated(f"{p!r} is not a prime")
    if n < 2:
        raise PreconditionViolated("n must be at least 2")
    if n % p == 0:
        raise PreconditionViolated(f"p = {p} divides n = {n}")
    q = p**n
    if q > AGL_MAX_FIELD:
        raise PreconditionViolated(f"field order {q} exceeds {AGL_MAX_FIELD}")
    cap = max_order(cap)
    if n * q * (q - 1) > cap:
        raise CapExceeded(f"group order {n * q * (q - 1)} exceeds cap {cap}")
    F = GaloisField(p, n)
    scalars = np.asarray([1] + list(range(2, q)), dtype=np.intp)
    frob = [F.frobenius(i) for i in range(n)]
    rows = []
    # index = (i * (q - 1) + rank(a)) * q + b, so the identity comes first
    for i in range(n):
        for a in scalars:
            scaled = F.mul[a, frob[i]]
            rows.append(F.add[scaled[:, None], np.arange(q)[None, :]].T)
    perms = np.concatenate(rows, axis=0)

    def index(i: int, a: int, b: int) -> int:
        return (i * (q - 1) + int(np.flatnonzero(scalars == a)[0])) * q + b

    prim = F.primitive
    sigma = index(1, 1, 0)
    G = GroupTable.from_elements(perms, [sigma, index(0, prim, 0), index(0, 1, 1)])
    affine = q * (q - 1)
    H = subgroup_from_indices(G, np.arange(affine), [index(0, prim, 0), index(0, 1, 1)])
    S = subgroup_from_indices(G, np.arange(q), [index(0, 1, p**j) for j in range(n)])
    D = subgroup_from_indices(G, np.arange(0, affine, q), [index(0, prim, 0)])
    logger.debug("built affine semilinear group on F_%d of order %d", q, G.order)
    return AglFamily(p, n, F, G, H, S, D, sigma)


@dataclass
class AglClaims:
    p: int
    n: int
    orders: Dict[str, int]
    order_p_subgroups: int
    hom_h_sizes: List[int]
    hyperfocal_order: int
    order_p_control: bool
    full_control: bool
    claims: Dict[str, bool] = field(default_factory=dict)
    fusion: Optional[FusionDiff] = None


def verify_agl_claims(p: int, n: int, family: Optional[AglFamily] = None, cap: Optional[int] = None) -> AglClaims:
    fam = family or build_agl_family(p, n, cap=cap)
    G, H, S, D = fam.G, fam.H, fam.S, fam.D
    q = p**n
    lines = [V for V in enumerate_subgroups(S, SubgroupFilters["CYCLIC_P_OR_4"], p=p) if V.order == p]
    sizes = set()
    reaches_all = True
    for A in lines:
        images = hom_images(H, A, S)
        sizes.update(len(hs) for hs in images.values())
        reaches_all &= len(images) == len(lines)
    hyp = hyperfocal_puig(G, S, p)
    order_p = compare_family(G, H, lines, S) is None
    diff = fusion_equal(G, H, S, p)
    t = int(S.members[1])
    orbit = np.unique(G.conj_many(t, D.members))
    pth = G.power_many(D.members, p)
    claims = {
        "group_order": G.order == q * (q - 1) * n,
        "order_p_subgroup_count": len(lines) == (q - 1) // (p - 1),
        "hom_h_size": sizes == {p - 1} and reaches_all,
        "hyperfocal_is_s": hyp == S,
        "s_equals_commutator_with_d": commutator_subgroup(S, D) == S,
        "order_p_control": order_p,
        "no_full_control": not diff.equal,
        "d_free_transitive": len(orbit) == D.order == q - 1 and bool(np.all(S.flags[orbit])) and 0 not in orbit,
        "sigma_is_pth_power": bool(np.array_equal(G.conj_many(D.members, fam.sigma), pth)),
        "s_elementary_abelian": is_elementary_abelian(S, p) and S.order == q,
    }
    report = AglClaims(
        p=p,
        n=n,
        orders={"G": G.order, "H": H.order, "S": S.order, "D": D.order, "D_hat": G.order // q},
        order_p_subgroups=len(lines),
        hom_h_sizes=sorted(sizes),
        hyperfocal_order=hyp.order,
        order_p_control=order_p,
        full_control=diff.equal,
        claims=claims,
        fusion=diff,
    )
    failed = [k for k, ok in claims.items() if not ok]
    if failed:
        raise ClaimFailed(", ".join(failed))
    return report


def _matrix_perm(matrix: Sequence[Sequence[int]], p: int = 3) -> Permutation:
    """A 2x2 matrix over F_p on the nonzero column vectors, coded v0 + p*v1 - 1."""
    images = []
    for code in range(1, p * p):
        v0, v1 = code % p, code // p
        w0 = (matrix[0][0] * v0 + matrix[0][1] * v1) % p
        w1 = (matrix[1][0] * v0 + matrix[1][1] * v1) % p
        images.append(w0 + p * w1 - 1)
    return Permutation(tuple(images))


SL23_GENERATORS = ([[1, 1], [0, 1]], [[1, 0], [1, 1]])


def build_sl23() -> Tuple[GroupTable, SubgroupHandle]:
    G = enumerate_group(8, [_matrix_perm(m) for m in SL23_GENERATORS])
    return G, sylow_p(G, 2)


def build_gl23() -> GroupTable:
    return enumerate_group(8, [_matrix_perm(m) for m in SL23_GENERATORS + ([[2, 0], [0, 1]],)])


@dataclass
class QuillenReport:
    order: int
    sylow_order: int
    involutions: int
    center_order: int
    quotient_order: int
    elementary_abelian_hypothesis: bool
    exponent_four_hypothesis: bool
    witness: Optional[HypothesisWitness]
    fusion: FusionDiff
    claims: Dict[str, bool] = field(default_factory=dict)


def verify_sl23_quillen() -> QuillenReport:
    G, S = build_sl23()
    ea, _ = thm1_hypothesis(G, S, S, 2, filter=SubgroupFilters["ELEMENTARY_ABELIAN"])
    e4, witness = thm1_hypothesis(G, S, S, 2)
    diff = fusion_equal(G, S, S, 2)
    Z = center(G)
    involutions = int(np.sum(G.orders[S.members] == 2))
    quo = quotient(G.whole(), Z).table.order
    claims = {
        "order": G.order == 24 and S.order == 8,
        "one_involution": involutions == 1,
        "center_order_2": Z.order == 2 and quo == 12,
        "elementary_abelian_passes": ea,
        "exponent_four_fails": not e4 and witness is not None and witness.A.order == 4 and witness.B != witness.A,
        "fusion_differs": not diff.equal,
        "hyperfocal_is_s": hyperfocal_puig(G, S, 2) == S,
    }
    report = QuillenReport(G.order, S.order, involutions, Z.order, quo, ea, e4, witness, diff, claims)
    failed = [k for k, ok in claims.items() if not ok]
    if failed:
        raise ClaimFailed(", ".join(failed))
    return report


# builtin constructors: each returns (degree, generators)

def cyclic(n: int) -> Tuple[int, List[Permutation]]:
    return n, [Permutation.from_cycles(n, [list(range(n))])] if n > 1 else [Permutation.identity(1)]


def elementary_abelian(p: int, k: int) -> Tuple[int, List[Permutation]]:
    d = p * k
    return d, [Permutation.from_cycles(d, [list(range(j * p, (j + 1) * p))]) for j in range(k)]


def metacyclic(m: int, t: int, r: int, s: int) -> Tuple[int, List[Permutation]]:
    """<a, b | a^m, b^t = a^s, b a = a^r b> by right multiplication on the words a^i b^j."""
    if pow(r, t, m) != 1 % m or (s * r - s) % m:
        raise PreconditionViolated("inconsistent metacyclic parameters")
    d = m * t

    def times(i: int, j: int, k: int, l: int) -> int:
        e, f = (i + k * pow(r, j, m)) % m, j + l
        if f >= t:
            e, f = (e + s) % m, f - t
        return e * t + f

    a = tuple(times(w // t, w % t, 1, 0) for w in range(d))
    b = tuple(times(w // t, w % t, 0, 1) for w in range(d))
    return d, [Permutation(a), Permutation(b)]


def dihedral(order: int) -> Tuple[int, List[Permutation]]:
    m = order // 2
    return m, [Permutation.from_cycles(m, [list(range(m))]), Permutation(tuple((-i) % m for i in range(m)))]


def quaternion(order: int) -> Tuple[int, List[Permutation]]:
    m = order // 2
    return metacyclic(m, 2, m - 1, m // 2)


def semidihedral(order: int) -> Tuple[int, List[Permutation]]:
    m = order // 2
    return metacyclic(m, 2, m // 2 - 1, 0)


def direct_product(*factors: Tuple[int, List[Permutation]]) -> Tuple[int, List[Permutation]]:
    total = sum(d for d, _ in factors)
    gens, offset = [], 0
    for d, fgens in factors:
        for g in fgens:
            images = list(range(total))
            for x in range(d):
                images[offset + x] = offset + g.images[x]
            gens.append(Permutation(tuple(images)))
        offset += d
    return total, gens


def _matrix_group(name: str) -> Tuple[int, List[Permutation]]:
    mats = SL23_GENERATORS if name == "sl23" else SL23_GENERATORS + ([[2, 0], [0, 1]],)
    return 8, [_matrix_perm(m) for m in mats]


def _builtin_generators(kind: str, params: Dict[str, Any]) -> Tuple[int, List[Permutation]]:
    if kind == "cyclic":
        return cyclic(int(params["n"]))
    if kind == "elementary_abelian":
        return elementary_abelian(int(params["p"]), int(params["k"]))
    if kind == "dihedral":
        return dihedral(int(params["order"]))
    if kind == "quaternion":
        return quaternion(int(params["order"]))
    if kind == "semidihedral":
        return semidihedral(int(params["order"]))
    if kind == "metacyclic":
        return metacyclic(int(params["m"]), int(params["t"]), int(params["r"]), int(params["s"]))
    if kind in ("sl23", "gl23"):
        return _matrix_group(kind)
    if kind == "direct_product":
        return direct_product(*[_builtin_generators(f["builtin"], f.get("params", {})) for f in params["factors"]])
    raise PreconditionViolated(f"unknown builtin {kind!r}")


@dataclass(frozen=True)
class Expected:
    value: Union[int, bool]
    provenance: str


@dataclass
class CorpusEntry:
    name: str
    group: GroupTable
    primes: List[int]
    expected: Dict[str, Expected] = field(default_factory=dict)
    source: str = ""
    subgroups: Dict[str, SubgroupHandle] = field(default_factory=dict)


def _build_entry(raw: Dict[str, Any], base: Path, cap: Optional[int]) -> CorpusEntry:
    name = raw["name"]
    subgroups: Dict[str, SubgroupHandle] = {}
    if "file" in raw:
        G = load_group_file(base / raw["file"], cap=cap)
        source = raw["file"]
    elif raw.get("builtin") == "agl":
        params = raw.get("params", {})
        fam = build_agl_family(int(params["p"]), int(params["n"]), cap=cap)
        if params.get("affine_only"):
            G, _ = reindex(fam.H)
        else:
            G = fam.G
            subgroups["affine"] = fam.H
        source = f"builtin:agl:{params['p']}:{params['n']}"
    elif "builtin" in raw:
        degree, gens = _builtin_generators(raw["builtin"], raw.get("params", {}))
        G = enumerate_group(degree, gens, cap=cap)
        source = f"builtin:{raw['builtin']}"
    else:
        raise PreconditionViolated(f"corpus entry {name!r} has neither file nor builtin")
    expected = {k: Expected(v["value"], v.get("provenance", "DERIVED")) for k, v in raw.get("expected", {}).items()}
    primes = [int(p) for p in raw.get("primes", [])]
    for p in primes:
        if not isprime(p):
            raise PNotPrime(f"{p!r} in corpus entry {name!r}")
    return CorpusEntry(name, G, primes, expected, source, subgroups)


def measured_values(entry: CorpusEntry) -> Dict[str, Union[int, bool]]:
    """The quantities corpus expectations may name."""
    G = entry.group
    out: Dict[str, Union[int, bool]] = {"order": G.order}
    for p in entry.primes:
        S = sylow_p(G, p)
        out[f"sylow_order_p{p}"] = S.order
        out[f"hyperfocal_order_p{p}"] = hyperfocal_puig(G, S, p).order
        out[f"focal_order_p{p}"] = focal_subgroup(G, S, p).order
        out[f"p_nilpotent_p{p}"] = is_p_nilpotent(G, p)
    return out


def verify_expected(entry: CorpusEntry) -> None:
    measured = measured_values(entry)
    bad = []
    for key, exp in sorted(entry.expected.items()):
        if key not in measured:
            bad.append(f"{key}: unknown quantity")
        elif measured[key] != exp.value:
            bad.append(f"{key}: expected {exp.value} ({exp.provenance}), got {measured[key]}")
    if bad:
        raise ClaimFailed(f"{entry.name}: " + "; ".join(bad))


def default_manifest() -> Path:
    return Path(str(resources.files("fusionkit") / "data" / "corpus" / "manifest.json"))


def _read_manifest(path: Optional[Union[str, Path]]) -> Tuple[Path, List[Dict[str, Any]]]:
    path = Path(path) if path is not None else default_manifest()
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
        return path, list(raw["entries"])
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as e:
        raise GroupFormatError(f"bad manifest {path.name}: {e}")


def manifest_names(path: Optional[Union[str, Path]] = None) -> List[str]:
    return [e["name"] for e in _read_manifest(path)[1]]


def load_manifest(
    path: Optional[Union[str, Path]] = None,
    verify: bool = True,
    cap: Optional[int] = None,
    names: Optional[Iterable[str]] = None,
) -> List[CorpusEntry]:
    """Corpus entries in manifest order, optionally restricted to `names`."""
    path, raw = _read_manifest(path)
    wanted = set(names) if names is not None else None
    entries = [_build_entry(e, path.parent, cap) for e in raw if wanted is None or e["name"] in wanted]
    if verify:
        for e in entries:
            verify_expected(e)
    logger.info("loaded %d corpus entries from %s", len(entries), path)
    return entries


def builtin_corpus() -> List[CorpusEntry]:
    return load_manifest()


def corpus_pairs(entry: CorpusEntry, p: int, limit: int = 4) -> Tuple[SubgroupHandle, List[Tuple[str, SubgroupHandle]]]:
    """S and the subgroups H with S <= H <= G used by the implication suites."""
    G = entry.group
    S = sylow_p(G, p)
    pairs: List[Tuple[str, SubgroupHandle]] = [("G", G.whole()), ("N_G(S)", normalizer(G, S)), ("S", S)]
    for label, K in sorted(entry.subgroups.items()):
        if S <= K:
            pairs.append((label, K))
    seen = {H.mask for _, H in pairs}
    covered = S.flags.copy()
    added = 0
    for g in range(G.order):
        if added >= limit:
            break
        if covered[g]:
            continue
        H = extend_subgroup(S, g)
        covered[g] = True
        if H.mask in seen:
            continue
        seen.add(H.mask)
        pairs.append((f"<S,{g}>", H))
        added += 1
    return S, pairs
