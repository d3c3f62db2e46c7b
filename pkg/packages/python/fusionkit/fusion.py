from __future__ import annotations
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple
import logging

import numpy as np

from .errors import ClaimFailed, PreconditionViolated
from .group import (
    GroupLike,
    GroupTable,
    QuotientMap,
    SubgroupHandle,
    as_subgroup,
    centralizer,
    enumerate_group,
    intersection,
    normalizer,
    quotient,
    reindex,
    subgroup_from_indices,
    subgroup_generated,
)
from .pstructure import enumerate_subgroups, p_part, prime_of_p_group, sylow_conjugates, sylow_p

logger = logging.getLogger(__name__)

# A map A -> B as the images (parent element indices) of A.members, in order.
MapTable = Tuple[int, ...]


@dataclass(frozen=True)
class HomSet:
    domain: SubgroupHandle
    codomain: SubgroupHandle
    maps: FrozenSet[MapTable]

    def __len__(self) -> int:
        return len(self.maps)

    def __contains__(self, table: MapTable) -> bool:
        return tuple(table) in self.maps

    def sorted_maps(self) -> List[MapTable]:
        return sorted(self.maps)

    def verify(self) -> None:
        """Every table is an injective homomorphism into the codomain."""
        A = self.domain
        parent = A.parent
        a = A.members
        for t in self.maps:
            t = np.asarray(t, dtype=np.intp)
            if len(t) != len(a) or len(np.unique(t)) != len(t):
                raise ClaimFailed("hom table is not injective")
            if not np.all(self.codomain.flags[t]):
                raise ClaimFailed("hom table leaves the codomain")
            for g in A.generators:
                lhs = t[np.searchsorted(a, parent.mul_many(a, g))]
                rhs = parent.mul_many(t, t[np.searchsorted(a, g)])
                if not np.array_equal(lhs, rhs):
                    raise ClaimFailed("hom table is not a homomorphism")


def _conjugation_tables(G: GroupLike, A: SubgroupHandle, within: Optional[SubgroupHandle] = None) -> np.ndarray:
    """Distinct maps c_g restricted to A (g in G, A^g <= within), one row per map."""
    U = as_subgroup(G)
    table = U.parent
    if A.parent is not table:
        raise PreconditionViolated("subgroup and group live in different tables")
    u = U.members
    gens = np.asarray(A.generators, dtype=np.intp)
    if not len(gens):
        return np.zeros((1, 1), dtype=np.intp)
    gimg = table.conj_many(gens[None, :], u[:, None]).reshape(len(u), len(gens))
    if within is not None:
        keep = np.all(within.flags[gimg], axis=1)
        u, gimg = u[keep], gimg[keep]
        if not len(u):
            return np.zeros((0, A.order), dtype=np.intp)
    _, first = np.unique(gimg, axis=0, return_index=True)
    reps = u[np.sort(first)]
    return table.conj_many(A.members[None, :], reps[:, None]).reshape(len(reps), A.order)


def hom_images(G: GroupLike, A: SubgroupHandle, within: Optional[SubgroupHandle] = None) -> Dict[Tuple[int, ...], HomSet]:
    """Hom_G(A, X) for every image X = A^g (inside `within` when given), keyed by X's member key."""
    table = as_subgroup(G).parent
    rows = _conjugation_tables(G, A, within)
    groups: Dict[Tuple[int, ...], List[MapTable]] = {}
    for row in rows.tolist():
        groups.setdefault(tuple(sorted(row)), []).append(tuple(row))
    out: Dict[Tuple[int, ...], HomSet] = {}
    for key in sorted(groups, key=lambda k: (len(k), k)):
        out[key] = HomSet(A, subgroup_from_indices(table, key), frozenset(groups[key]))
    return out


def hom_set(G: GroupLike, A: SubgroupHandle, B: SubgroupHandle) -> HomSet:
    """Hom_G(A, B): restrictions of conjugation maps c_g with A^g <= B."""
    rows = _conjugation_tables(G, A, B)
    hs = HomSet(A, B, frozenset(tuple(r) for r in rows.tolist()))
    hs.verify()
    return hs


def hom_tables(G: GroupLike, A: SubgroupHandle, B: SubgroupHandle) -> FrozenSet[MapTable]:
    return frozenset(tuple(r) for r in _conjugation_tables(G, A, B).tolist())


def conjugates_in(G: GroupLike, Q: SubgroupHandle, S: SubgroupHandle) -> List[SubgroupHandle]:
    """The G-conjugates of Q contained in S, sorted by (order, key)."""
    return [hs.codomain for hs in hom_images(G, Q, S).values()]


@dataclass(frozen=True)
class Automizer:
    """Aut_G(Q): N_G(Q) acting by conjugation on the positions of Q.members."""

    base: SubgroupHandle
    normalizer: SubgroupHandle
    aut: GroupTable
    inner: SubgroupHandle
    from_s: Optional[SubgroupHandle] = None

    def action_rows(self, gs: Iterable[int]) -> np.ndarray:
        gs = np.asarray(list(gs) if not isinstance(gs, np.ndarray) else gs, dtype=np.intp)
        q = self.base.members
        images = self.base.parent.conj_many(q[None, :], gs[:, None]).reshape(len(gs), len(q))
        return np.searchsorted(q, images)

    def element_images(self, gs: Iterable[int]) -> np.ndarray:
        return self.aut.lookup(self.action_rows(gs))

    def image(self, K: SubgroupHandle) -> SubgroupHandle:
        """Image in aut of a subgroup K <= N_G(Q)."""
        if not K <= self.normalizer:
            raise PreconditionViolated("subgroup does not normalize the automizer base")
        if not K.generators:
            return self.aut.trivial()
        return subgroup_generated(self.aut, self.element_images(K.generators).tolist())

    def apply(self, phi: int, x: int) -> int:
        """phi(x) for x an element of the base, as a parent index."""
        q = self.base.members
        return int(q[self.aut.perms[phi][int(np.searchsorted(q, x))]])

    @property
    def out_order(self) -> int:
        return self.aut.order // self.inner.order


def aut_group(G: GroupLike, Q: SubgroupHandle, S: Optional[SubgroupHandle] = None) -> Automizer:
    U = as_subgroup(G)
    if Q.parent is not U.parent or not Q <= U:
        raise PreconditionViolated("Q is not a subgroup of G")
    N = normalizer(U, Q)
    q = Q.members
    gens = np.asarray(N.generators, dtype=np.intp)
    if len(gens):
        rows = np.searchsorted(q, U.parent.conj_many(q[None, :], gens[:, None]).reshape(len(gens), len(q)))
    else:
        rows = np.zeros((0, len(q)), dtype=np.intp)
    aut = enumerate_group(len(q), [tuple(r) for r in rows.tolist()], cap=N.order)
    partial = Automizer(Q, N, aut, aut.trivial())
    inner = partial.image(Q)
    from_s = partial.image(intersection(S, N)) if S is not None else None
    return Automizer(Q, N, aut, inner, from_s)


def out_group(autz: Automizer) -> QuotientMap:
    """Out = Aut_G(Q) / Inn(Q)."""
    return quotient(autz.aut.whole(), autz.inner)


class _UnionFind:
    def __init__(self, items: Iterable[int]) -> None:
        self.parent = {x: x for x in items}
        self.rank = {x: 0 for x in self.parent}

    def find(self, x: int) -> int:
        y = self.parent[x]
        if self.parent[y] != y:
            y = self.parent[x] = self.find(y)
        return y

    def union(self, x: int, y: int) -> None:
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x
        del self.rank[y]

    def __len__(self) -> int:
        return len(self.rank)


def sylow_graph_components(X: GroupLike, p: int) -> int:
    """Components of the graph on Sylow p-subgroups of X, joined when they meet nontrivially."""
    S0 = sylow_p(X, p)
    if S0.is_trivial():
        return 0
    syl = sylow_conjugates(X, S0)
    uf = _UnionFind(range(len(syl)))
    for i in range(len(syl)):
        for j in range(i + 1, len(syl)):
            if not intersection(syl[i], syl[j]).is_trivial():
                uf.union(i, j)
    return len(uf)


def has_strongly_p_embedded(X: GroupLike, p: int) -> bool:
    return sylow_graph_components(X, p) > 1


def _resolve_prime(S: SubgroupHandle, p: Optional[int]) -> Optional[int]:
    return prime_of_p_group(S) if p is None else p


def _check_local(G: GroupLike, S: SubgroupHandle, Q: SubgroupHandle, p: Optional[int]) -> Optional[int]:
    U = as_subgroup(G)
    if not (Q.parent is S.parent is U.parent):
        raise PreconditionViolated("subgroups live in different tables")
    if not Q <= S:
        raise PreconditionViolated("Q is not contained in S")
    if not S <= U:
        raise PreconditionViolated("S is not contained in G")
    p = _resolve_prime(S, p)
    if p is not None and S.order != p_part(U.order, p):
        raise PreconditionViolated("S is not a Sylow subgroup of G")
    return p


def is_fully_normalized(G: GroupLike, S: SubgroupHandle, Q: SubgroupHandle, p: Optional[int] = None) -> bool:
    _check_local(G, S, Q, p)
    n = normalizer(S, Q).order
    return all(n >= normalizer(S, R).order for R in conjugates_in(G, Q, S))


def is_centric(G: GroupLike, S: SubgroupHandle, Q: SubgroupHandle, p: Optional[int] = None) -> bool:
    _check_local(G, S, Q, p)
    return all(centralizer(S, R) <= R for R in conjugates_in(G, Q, S))


def is_radical(G: GroupLike, S: SubgroupHandle, Q: SubgroupHandle, p: Optional[int] = None) -> bool:
    """O_p(Out_G(Q)) = 1, with O_p taken as the intersection of the Sylow p-subgroups."""
    p = _check_local(G, S, Q, p)
    if p is None:
        return True
    out = out_group(aut_group(G, Q)).table
    S0 = sylow_p(out, p)
    flags = S0.flags.copy()
    for T in sylow_conjugates(out, S0):
        flags &= T.flags
    return int(flags.sum()) == 1


def is_essential(G: GroupLike, S: SubgroupHandle, Q: SubgroupHandle, p: Optional[int] = None) -> bool:
    p = _check_local(G, S, Q, p)
    if p is None or Q == S or not is_centric(G, S, Q, p):
        return False
    out = out_group(aut_group(G, Q)).table
    if out.order % p:
        return False
    return has_strongly_p_embedded(out, p)


def _class_partition(H: GroupLike, S: SubgroupHandle) -> List[List[SubgroupHandle]]:
    classes: List[List[SubgroupHandle]] = []
    placed = set()
    for Q in enumerate_subgroups(S):
        if Q.mask in placed:
            continue
        members = conjugates_in(H, Q, S)
        placed.update(R.mask for R in members)
        classes.append(members)
    return classes


def subgroup_classes(H: GroupLike, S: SubgroupHandle) -> List[SubgroupHandle]:
    """Smallest representative of each H-conjugacy class of subgroups of S."""
    return [cls[0] for cls in _class_partition(H, S)]


def essential_classes(G: GroupLike, S: SubgroupHandle, p: Optional[int] = None) -> List[SubgroupHandle]:
    """A fully normalized representative of each G-class of essential subgroups of S."""
    p = _resolve_prime(S, p)
    out: List[SubgroupHandle] = []
    if p is None:
        return out
    for cls in _class_partition(G, S):
        best = max(normalizer(S, R).order for R in cls)
        rep = next(R for R in cls if normalizer(S, R).order == best)
        if is_essential(G, S, rep, p):
            out.append(rep)
    return out


@dataclass(frozen=True)
class HomWitness:
    subgroup: SubgroupHandle
    codomain: SubgroupHandle
    table: MapTable

    def pairs(self) -> List[Tuple[int, int]]:
        return [(int(a), int(b)) for a, b in zip(self.subgroup.members.tolist(), self.table)]


@dataclass(frozen=True)
class FusionDiff:
    equal: bool
    witness: Optional[HomWitness] = None


def check_fusion_pair(G: GroupLike, H: GroupLike, S: SubgroupHandle, p: int) -> None:
    U, V = as_subgroup(G), as_subgroup(H)
    if not (S.parent is V.parent is U.parent):
        raise PreconditionViolated("groups live in different tables")
    if not S <= V:
        raise PreconditionViolated("S is not contained in H")
    if not V <= U:
        raise PreconditionViolated("H is not contained in G")
    if S.order != p_part(U.order, p):
        raise PreconditionViolated("S is not a Sylow subgroup of G")


def fusion_equal(G: GroupLike, H: GroupLike, S: SubgroupHandle, p: int, exhaustive: bool = False) -> FusionDiff:
    """F_S(H) = F_S(G), compared on Hom(Q, S) for Q over H-class representatives.

    With exhaustive=True every subgroup of S is compared. On failure the witness
    is the smallest Q by (order, key) with the smallest offending table.
    """
    check_fusion_pair(G, H, S, p)
    candidates = enumerate_subgroups(S) if exhaustive else subgroup_classes(H, S)
    for Q in candidates:
        missing = hom_tables(G, Q, S) - hom_tables(H, Q, S)
        if not missing:
            continue
        table = min(missing)
        if table in hom_set(H, Q, S):
            raise ClaimFailed("fusion witness is present in the smaller hom set")
        image = subgroup_from_indices(S.parent, table)
        logger.debug("fusion differs at a subgroup of order %d", Q.order)
        return FusionDiff(False, HomWitness(Q, image, table))
    return FusionDiff(True)


def normalizer_system_group(G: GroupLike, S: SubgroupHandle) -> Tuple[GroupTable, SubgroupHandle]:
    """N_G(S) re-indexed as its own table, with S inside it."""
    p = prime_of_p_group(S)
    U = as_subgroup(G)
    if S.parent is not U.parent or not S <= U or (p is not None and S.order != p_part(U.order, p)):
        raise PreconditionViolated("S is not a Sylow subgroup of G")
    tbl, emb = reindex(normalizer(U, S))
    return tbl, subgroup_from_indices(tbl, np.searchsorted(emb, S.members))
