from __future__ import annotations
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Union
import logging

import numpy as np

from .constants import SubgroupFilters
from .errors import NotFound, NotPGroup, PreconditionViolated
from .fusion import aut_group
from .group import (
    GroupLike,
    GroupTable,
    SubgroupHandle,
    center,
    enumerate_group,
    exponent,
    is_normal,
    reindex,
    subgroup_generated,
    upper_central_series,
)
from .pstructure import check_prime, enumerate_subgroups, is_p_group, op_residual, p_part

logger = logging.getLogger(__name__)


def _inner_rows(P: GroupTable) -> np.ndarray:
    """Conjugation by each generator of P as a permutation of P's element indices."""
    gens = np.asarray(P.generators, dtype=np.intp)
    n = P.order
    if not len(gens):
        return np.zeros((0, n), dtype=np.intp)
    return P.conj_many(np.arange(n)[None, :], gens[:, None]).reshape(len(gens), n)


@dataclass(frozen=True)
class AutSetup:
    """A p-group P with a group G of automorphisms of P containing Inn(P).

    G permutes the element indices of P's own table. `embedding[i]` is the
    ambient index of P-element i when the setup came from an ambient group.
    """

    P: GroupTable
    G: GroupTable
    inn: SubgroupHandle
    p: int
    embedding: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        if self.G.degree != self.P.order:
            raise PreconditionViolated("automorphisms must permute the elements of P")
        if not is_p_group(self.P, self.p):
            raise NotPGroup(f"order {self.P.order} is not a power of {self.p}")
        n = self.P.order
        a, b = np.repeat(np.arange(n), n), np.tile(np.arange(n), n)
        prod = self.P.mul_many(a, b)
        for phi in self.G.generators:
            row = self.G.perms[phi].astype(np.intp)
            if row[0] != 0 or not np.array_equal(row[prod], self.P.mul_many(row[a], row[b])):
                raise PreconditionViolated(f"element {phi} is not an automorphism of P")
        if self.inn.parent is not self.G:
            raise PreconditionViolated("Inn(P) must be a subgroup of G")
        inner = self.G.lookup(_inner_rows(self.P))
        if np.any(inner < 0):
            raise PreconditionViolated("G does not contain Inn(P)")

    @classmethod
    def from_automorphisms(cls, P: GroupTable, automorphisms: Sequence[Sequence[int]], p: int) -> "AutSetup":
        """Setup generated by the given automorphisms together with Inn(P)."""
        n = P.order
        gens = [tuple(int(x) for x in a) for a in automorphisms]
        gens += [tuple(r) for r in _inner_rows(P).tolist()]
        G = enumerate_group(n, gens)
        inner = G.lookup(np.asarray(gens[len(automorphisms):], dtype=np.intp).reshape(-1, n))
        return cls(P, G, subgroup_generated(G, inner.tolist()), check_prime(p))


@dataclass(frozen=True)
class AbelianAudit:
    subgroup: SubgroupHandle
    is_normal_in_P: bool
    centralizer_is_p_group: bool


@dataclass(frozen=True)
class CriticalCertificate:
    D: SubgroupHandle
    checks: Dict[str, bool]
    maximal_abelians: List[AbelianAudit] = field(default_factory=list)
    series_stabilizer_is_p_group: bool = True

    @property
    def ok(self) -> bool:
        return all(self.checks.values()) and all(a.is_normal_in_P and a.centralizer_is_p_group for a in self.maximal_abelians)


def automizer_setup(ambient: GroupLike, P: SubgroupHandle, p: int) -> AutSetup:
    """Aut_ambient(P) acting on P's own table; Inn(P) is the image of P."""
    p = check_prime(p)
    if not is_p_group(P, p):
        raise NotPGroup(f"order {P.order} is not a power of {p}")
    autz = aut_group(ambient, P)
    P_table, emb = reindex(P)
    return AutSetup(P_table, autz.aut, autz.inner, p, emb)


def _aut_rows(X: Union[SubgroupHandle, np.ndarray, Sequence[Sequence[int]]]) -> np.ndarray:
    if isinstance(X, SubgroupHandle):
        return X.parent.perms[X.members].astype(np.intp)
    return np.asarray(X, dtype=np.intp).reshape(len(X), -1)


def commutator_with_auts(P: GroupTable, X, target: Optional[SubgroupHandle] = None) -> SubgroupHandle:
    """[target, X] = <x^-1 phi(x) : x in target, phi in X> inside P's table."""
    rows = _aut_rows(X)
    xs = target.members if target is not None else np.arange(P.order)
    if not len(rows):
        return P.trivial()
    images = rows[:, xs]
    base = np.broadcast_to(P.inverse[xs], images.shape)
    elems = np.unique(P.mul_many(base.ravel(), images.ravel()))
    return subgroup_generated(P, elems)


def _g_invariant(setup: AutSetup, D: SubgroupHandle) -> bool:
    """Generator-level test used while searching."""
    gens = np.asarray(D.generators, dtype=np.intp)
    if not len(gens):
        return True
    return all(bool(np.all(D.flags[setup.G.perms[phi][gens]])) for phi in setup.G.generators)


def _g_invariant_all(setup: AutSetup, D: SubgroupHandle) -> bool:
    """Every element of G maps every member of D into D."""
    return bool(np.all(D.flags[setup.G.perms[:, D.members]]))


def _class_condition(setup: AutSetup, D: SubgroupHandle) -> bool:
    """[D, P] <= Z(D), checked on every pair (d, x)."""
    P = setup.P
    Z = center(D)
    d = D.members
    x = np.arange(P.order)
    return bool(np.all(Z.flags[P.commutators(np.repeat(d, len(x)), np.tile(x, len(d)))]))


def _exponent_ok(D: SubgroupHandle, p: int) -> bool:
    return (4 if p == 2 else p) % exponent(D) == 0


def _p_prime_elements(setup: AutSetup) -> np.ndarray:
    orders = setup.G.orders
    return np.flatnonzero((orders % setup.p != 0) & (orders > 1))


def _faithful(setup: AutSetup, D: SubgroupHandle) -> bool:
    """No nontrivial p'-element of G fixes D pointwise."""
    pp = _p_prime_elements(setup)
    if not len(pp):
        return True
    fixed = np.all(setup.G.perms[pp][:, D.members] == D.members, axis=1)
    return not bool(np.any(fixed))


def centralizer_in_auts(setup: AutSetup, A: SubgroupHandle) -> np.ndarray:
    """Elements of G fixing A pointwise."""
    return np.flatnonzero(np.all(setup.G.perms[:, A.members] == A.members, axis=1))


def audit_maximal_abelians(setup: AutSetup, D: SubgroupHandle) -> List[AbelianAudit]:
    out = []
    whole = setup.P.whole()
    for A in enumerate_subgroups(D, SubgroupFilters["MAXIMAL_ABELIAN"], p=setup.p):
        c = len(centralizer_in_auts(setup, A))
        out.append(AbelianAudit(A, is_normal(whole, A), p_part(c, setup.p) == c))
    return out


def series_stabilizer_is_p_group(setup: AutSetup, D: SubgroupHandle) -> bool:
    """The automorphisms acting trivially on each factor of D ∩ Z_i(P) form a p-group.

    Z_i(P) is the upper central series of the setup's own P, the group the
    automorphisms act on, even when P is a proper subgroup of a Sylow subgroup.
    """
    P = setup.P
    terms = [D.flags & Z.flags for Z in upper_central_series(P).terms]
    keep = np.ones(setup.G.order, dtype=bool)
    perms = setup.G.perms.astype(np.intp)
    for lower, upper in zip(terms, terms[1:]):
        xs = np.flatnonzero(upper)
        if not len(xs):
            continue
        images = perms[:, xs]
        quo = P.mul_many(np.broadcast_to(P.inverse[xs], images.shape).ravel(), images.ravel())
        keep &= np.all(lower[quo.reshape(images.shape)], axis=1)
    c = int(keep.sum())
    return p_part(c, setup.p) == c


def find_thompson_D(setup: AutSetup, p: Optional[int] = None) -> CriticalCertificate:
    """Smallest G-invariant D <= [P, O^p(G)] of exponent p (or dividing 4 when p = 2)
    with [D, P] <= Z(D) on which every nontrivial p'-element of G acts nontrivially.
    """
    p = check_prime(setup.p if p is None else p)
    if p != setup.p:
        raise PreconditionViolated("prime does not match the setup")
    T = commutator_with_auts(setup.P, op_residual(setup.G, p))
    candidates = enumerate_subgroups(T, SubgroupFilters["SMALL_EXPONENT"], p=p)
    for D in candidates:
        if not _g_invariant(setup, D) or not _class_condition(setup, D) or not _faithful(setup, D):
            continue
        logger.debug("thompson subgroup of order %d found among %d candidates", D.order, len(candidates))
        return certify_D(setup, D, T)
    raise NotFound(f"no candidate among {len(candidates)} subgroups of [P, O^p(G)] of order {T.order}")


def certify_D(setup: AutSetup, D: SubgroupHandle, T: Optional[SubgroupHandle] = None) -> CriticalCertificate:
    """Evaluate every property of a critical-type subgroup for an arbitrary D <= P."""
    if D.parent is not setup.P:
        raise PreconditionViolated("D must be a subgroup of the setup's P")
    if T is None:
        T = commutator_with_auts(setup.P, op_residual(setup.G, setup.p))
    checks = {
        "G_invariant": _g_invariant_all(setup, D),
        "exponent_ok": _exponent_ok(D, setup.p),
        "class_condition": _class_condition(setup, D),
        "faithful_p_prime_action": _faithful(setup, D),
        "contained_in_T": bool(D <= T),
    }
    return CriticalCertificate(D, checks, audit_maximal_abelians(setup, D), series_stabilizer_is_p_group(setup, D))
