from __future__ import annotations
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional
import logging

import numpy as np
from sympy import factorint, isprime

from .constants import SubgroupFilters, subgroup_cap
from .errors import CapExceeded, NotPGroup, PNotPrime, PreconditionViolated, SylowMismatch
from .group import (
    GroupLike,
    SubgroupHandle,
    as_subgroup,
    conjugate_subgroup,
    derived_subgroup,
    exponent,
    extend_subgroup,
    intersection,
    is_abelian,
    is_elementary_abelian,
    normalizer,
    subgroup_generated,
)

logger = logging.getLogger(__name__)


def check_prime(p: int) -> int:
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)) or not isprime(int(p)):
        raise PNotPrime(f"{p!r} is not a prime")
    return int(p)


def p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def prime_of_p_group(H: GroupLike) -> Optional[int]:
    """The prime p with |H| a power of p; None for the trivial group or a non-p-group."""
    f = factorint(as_subgroup(H).order)
    return int(next(iter(f))) if len(f) == 1 else None


def is_p_group(H: GroupLike, p: int) -> bool:
    order = as_subgroup(H).order
    return p_part(order, p) == order


def _p_element_mask(orders: np.ndarray, p: int) -> np.ndarray:
    mask = np.zeros(len(orders), dtype=bool)
    for o in np.unique(orders).tolist():
        if p_part(o, p) == o:
            mask |= orders == o
    return mask


def sylow_p(G: GroupLike, p: int) -> SubgroupHandle:
    """A Sylow p-subgroup found by normalizer climbing, deterministic in element-index order."""
    p = check_prime(p)
    U = as_subgroup(G)
    table = U.parent
    target = p_part(U.order, p)
    if target == 1:
        return table.trivial()
    u = U.members
    orders = table.orders[u]
    pel = _p_element_mask(orders, p)
    seed = int(u[pel][np.argmax(orders[pel])])
    P = subgroup_generated(table, [seed])
    while P.order < target:
        N = normalizer(U, P)
        cand = N.members[~P.flags[N.members]]
        cand = cand[P.flags[table.power_many(cand, p)]]
        if not len(cand):
            raise SylowMismatch(f"normalizer climbing stalled at order {P.order}")
        P = extend_subgroup(P, int(cand[0]))
    logger.debug("sylow %d-subgroup of order %d", p, P.order)
    return P


def sylow_conjugates(G: GroupLike, S: SubgroupHandle) -> List[SubgroupHandle]:
    """All conjugates of S in G, one per right coset of N_G(S), S first."""
    U = as_subgroup(G)
    table = U.parent
    N = normalizer(U, S)
    covered = np.zeros(table.order, dtype=bool)
    out: List[SubgroupHandle] = []
    for g in U.members.tolist():
        if covered[g]:
            continue
        covered[table.mul_many(N.members, g)] = True
        out.append(conjugate_subgroup(S, g))
    return out


def op_core(G: GroupLike, p: int) -> SubgroupHandle:
    """O_p(G): the intersection of all Sylow p-subgroups."""
    S = sylow_p(G, p)
    flags = S.flags.copy()
    for T in sylow_conjugates(G, S):
        flags &= T.flags
    return SubgroupHandle(S.parent, flags)


def op_residual(G: GroupLike, p: int) -> SubgroupHandle:
    """O^p(G): generated by the elements of order prime to p."""
    p = check_prime(p)
    U = as_subgroup(G)
    u = U.members
    return subgroup_generated(U.parent, u[U.parent.orders[u] % p != 0])


def check_sylow(G: GroupLike, S: SubgroupHandle, p: int) -> None:
    U = as_subgroup(G)
    if S.parent is not U.parent or not S <= U:
        raise SylowMismatch("subgroup is not contained in the group")
    if S.order != p_part(U.order, p):
        raise SylowMismatch(f"order {S.order} is not the {p}-part of {U.order}")


def hyperfocal_puig(G: GroupLike, S: SubgroupHandle, p: int) -> SubgroupHandle:
    p = check_prime(p)
    check_sylow(G, S, p)
    return intersection(S, op_residual(G, p))


def hyperfocal_fusion(G: GroupLike, S: SubgroupHandle, p: int) -> SubgroupHandle:
    """Subgroup of S generated by x^-1 phi(x) with phi in O^p(Aut_G(Q)), Q over S-classes."""
    from .fusion import aut_group, subgroup_classes

    p = check_prime(p)
    check_sylow(G, S, p)
    table = S.parent
    found: List[np.ndarray] = []
    for Q in subgroup_classes(S, S):
        autz = aut_group(G, Q)
        R = op_residual(autz.aut, p)
        if R.is_trivial():
            continue
        q = Q.members
        images = q[autz.aut.perms[R.members].astype(np.intp)]
        xs = np.broadcast_to(q, images.shape)
        found.append(table.mul_many(table.inverse[xs.ravel()], images.ravel()))
    if not found:
        return table.trivial()
    return subgroup_generated(table, np.unique(np.concatenate(found)))


def focal_subgroup(G: GroupLike, S: SubgroupHandle, p: int) -> SubgroupHandle:
    p = check_prime(p)
    check_sylow(G, S, p)
    return intersection(S, derived_subgroup(G))


def is_p_nilpotent(G: GroupLike, p: int) -> bool:
    S = sylow_p(G, p)
    return hyperfocal_puig(G, S, p).is_trivial()


def has_normal_p_complement(G: GroupLike, p: int) -> bool:
    """Direct check: the p'-elements form a subgroup of order the p'-part of |G|."""
    p = check_prime(p)
    U = as_subgroup(G)
    u = U.members
    pprime = u[U.parent.orders[u] % p != 0]
    if len(pprime) != U.order // p_part(U.order, p):
        return False
    return subgroup_generated(U.parent, pprime).order == len(pprime)


def _small_exponent_ok(p: int) -> Callable[[SubgroupHandle], bool]:
    bound = 4 if p == 2 else p
    return lambda L: bound % exponent(L) == 0


def _filter_predicate(name: str, p: int) -> Callable[[SubgroupHandle], bool]:
    if name == SubgroupFilters["ALL"]:
        return lambda L: True
    if name == SubgroupFilters["ELEMENTARY_ABELIAN"]:
        return lambda L: is_elementary_abelian(L, p)
    if name == SubgroupFilters["ABELIAN_EXPONENT_LE_4"]:
        return lambda L: is_abelian(L) and exponent(L) <= 4
    if name == SubgroupFilters["MAXIMAL_ABELIAN"]:
        return is_abelian
    if name == SubgroupFilters["SMALL_EXPONENT"]:
        return _small_exponent_ok(p)
    raise PreconditionViolated(f"unknown subgroup filter {name!r}")


def _cyclic_p_or_4(P: SubgroupHandle, p: int) -> List[SubgroupHandle]:
    table = P.parent
    wanted = (p, 4) if p == 2 else (p,)
    seen: Dict[int, SubgroupHandle] = {}
    covered = np.zeros(table.order, dtype=bool)
    for x in P.members[np.isin(table.orders[P.members], wanted)].tolist():
        if covered[x]:
            continue
        C = subgroup_generated(table, [x])
        covered[C.members[table.orders[C.members] == table.orders[x]]] = True
        seen.setdefault(C.mask, C)
    return sorted(seen.values(), key=lambda H: H.sort_key)


def enumerate_subgroups(
    P: GroupLike, filter: str = SubgroupFilters["ALL"], cap: Optional[int] = None, p: Optional[int] = None
) -> List[SubgroupHandle]:
    """Subgroups of the p-group P matching `filter`, sorted by (order, member key).

    Layered cyclic extension: every subgroup of order p^(k+1) is <K, y> for some
    K of order p^k and y in N_P(K) \\ K with y^p in K. All filters except
    maximal_abelian's final step are subgroup-closed, so failing layers are pruned.
    """
    P = as_subgroup(P)
    table = P.parent
    if p is None:
        p = prime_of_p_group(P)
        if p is None:
            if P.order != 1:
                raise NotPGroup(f"order {P.order} is not a prime power")
            p = 2
    elif not is_p_group(P, p):
        raise NotPGroup(f"order {P.order} is not a power of {p}")
    cap = subgroup_cap(cap)
    if filter == SubgroupFilters["CYCLIC_P_OR_4"]:
        out = _cyclic_p_or_4(P, p)
        if len(out) > cap:
            raise CapExceeded(f"more than {cap} subgroups")
        return out
    accept = _filter_predicate(filter, p)
    layers: List[List[SubgroupHandle]] = [[table.trivial()]]
    count = 1
    while layers[-1]:
        nxt: Dict[int, SubgroupHandle] = {}
        for K in layers[-1]:
            N = normalizer(P, K)
            cand = N.members[~K.flags[N.members]]
            if not len(cand):
                continue
            cand = cand[K.flags[table.power_many(cand, p)]]
            covered = np.zeros(table.order, dtype=bool)
            for y in cand.tolist():
                if covered[y]:
                    continue
                L = extend_subgroup(K, y)
                covered |= L.flags
                if L.mask in nxt or not accept(L):
                    continue
                nxt[L.mask] = L
                count += 1
                if count > cap:
                    raise CapExceeded(f"more than {cap} subgroups")
        layers.append(sorted(nxt.values(), key=lambda H: H.sort_key))
    found = [H for layer in layers for H in layer]
    if filter == SubgroupFilters["MAXIMAL_ABELIAN"]:
        found = [A for k, layer in enumerate(layers) for A in layer if not any(A <= B for B in layers[k + 1])]
    logger.debug("enumerated %d subgroups (filter=%s) of a group of order %d", len(found), filter, P.order)
    return found


@dataclass(frozen=True)
class PLocalProfile:
    prime: int
    sylow: SubgroupHandle
    op_p_residual: SubgroupHandle
    hyperfocal: SubgroupHandle
    focal: SubgroupHandle
    is_p_nilpotent: bool

    def orders(self) -> Dict[str, int]:
        return {
            "sylow": self.sylow.order,
            "op_residual": self.op_p_residual.order,
            "hyperfocal": self.hyperfocal.order,
            "focal": self.focal.order,
        }


def plocal_profile(G: GroupLike, p: int) -> PLocalProfile:
    S = sylow_p(G, p)
    residual = op_residual(G, p)
    hyp = intersection(S, residual)
    return PLocalProfile(
        prime=int(p),
        sylow=S,
        op_p_residual=residual,
        hyperfocal=hyp,
        focal=focal_subgroup(G, S, p),
        is_p_nilpotent=hyp.is_trivial(),
    )
