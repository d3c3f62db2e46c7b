from __future__ import annotations
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple, Union
import logging
import time
from warnings import warn

import numpy as np

from .constants import SubgroupFilters, TheoremIds
from .critical import automizer_setup, commutator_with_auts
from .errors import PreconditionViolated
from .fusion import (
    FusionDiff,
    HomWitness,
    MapTable,
    aut_group,
    check_fusion_pair,
    essential_classes,
    fusion_equal,
    hom_images,
    hom_set,
    is_centric,
    is_fully_normalized,
    subgroup_classes,
    conjugates_in,
)
from .group import (
    GroupLike,
    SubgroupHandle,
    as_subgroup,
    is_normal,
    normalizer,
    subgroup_from_indices,
    subgroup_generated,
)
from .pstructure import check_prime, enumerate_subgroups, hyperfocal_puig, is_p_nilpotent, op_residual

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HypothesisWitness:
    """First failing pair in (A, B, map) order.

    reason is "hom" (a G-map A -> B missing from H), "conjugacy" (A, B are
    G-conjugate but not H-conjugate) or "automizer" (|Aut_G(A)| != |Aut_H(A)|).
    """

    A: SubgroupHandle
    B: SubgroupHandle
    table: Optional[MapTable] = None
    reason: str = "hom"
    detail: Dict[str, int] = field(default_factory=dict)


@dataclass
class ControlReport:
    theorem_id: str
    prime: int
    group_orders: Dict[str, int]
    hypothesis_holds: bool
    hypothesis_witness: Optional[HypothesisWitness]
    conclusion_holds: bool
    conclusion_witness: Optional[HomWitness]
    implication_ok: bool
    elapsed_ms: float = 0.0
    in_scope: bool = True
    note: Optional[str] = None
    checks: Dict[str, Optional[Union[bool, int]]] = field(default_factory=dict)


def _first_hom_mismatch(G: GroupLike, H: GroupLike, A: SubgroupHandle, within: SubgroupHandle) -> Optional[HypothesisWitness]:
    """Smallest image C <= within with Hom_G(A, C) != Hom_H(A, C), with its smallest missing map."""
    from_h = hom_images(H, A, within)
    for key, hs in hom_images(G, A, within).items():
        theirs = from_h.get(key)
        missing = hs.maps - (theirs.maps if theirs is not None else frozenset())
        if missing:
            return HypothesisWitness(A, hs.codomain, min(missing))
    return None


def compare_family(G: GroupLike, H: GroupLike, family: Iterable[SubgroupHandle], within: SubgroupHandle) -> Optional[HypothesisWitness]:
    """Hom_H(A, B) = Hom_G(A, B) over all A, B in an isomorphism-closed family of subgroups of `within`.

    A failing B can be taken to be the image of the failing map itself, so
    only images are compared.
    """
    for A in sorted(family, key=lambda K: K.sort_key):
        w = _first_hom_mismatch(G, H, A, within)
        if w is not None:
            return w
    return None


def _default_thm1_filter(p: int) -> str:
    return SubgroupFilters["ABELIAN_EXPONENT_LE_4"] if p == 2 else SubgroupFilters["ELEMENTARY_ABELIAN"]


def _orders(G: GroupLike, H: GroupLike, S: SubgroupHandle, hyp: SubgroupHandle) -> Dict[str, int]:
    return {"G": as_subgroup(G).order, "H": as_subgroup(H).order, "S": S.order, "hyperfocal": hyp.order}


def _report(theorem_id: str, p: int, orders: Dict[str, int], hyp: Tuple[bool, Optional[HypothesisWitness]],
            conc: FusionDiff, started: float, **extra) -> ControlReport:
    holds, witness = hyp
    report = ControlReport(
        theorem_id=theorem_id,
        prime=p,
        group_orders=orders,
        hypothesis_holds=holds,
        hypothesis_witness=witness,
        conclusion_holds=conc.equal,
        conclusion_witness=conc.witness,
        implication_ok=(not holds) or conc.equal,
        elapsed_ms=(time.perf_counter() - started) * 1000.0,
        **extra,
    )
    if not report.implication_ok:
        logger.warning("implication violated for %s at p=%d", theorem_id, p)
    return report


def thm1_hypothesis(G: GroupLike, H: GroupLike, S: SubgroupHandle, p: int,
                    filter: Optional[str] = None) -> Tuple[bool, Optional[HypothesisWitness]]:
    """Hom_H(A, B) = Hom_G(A, B) for the small abelian subgroups A, B of the hyperfocal subgroup.

    `filter` forces a subgroup class (diagnostic mode), e.g. elementary abelian at p = 2.
    """
    p = check_prime(p)
    check_fusion_pair(G, H, S, p)
    hyp = hyperfocal_puig(G, S, p)
    family = enumerate_subgroups(hyp, filter or _default_thm1_filter(p), p=p)
    w = compare_family(G, H, family, hyp)
    return w is None, w


def thm1_validate(G: GroupLike, H: GroupLike, S: SubgroupHandle, p: int, filter: Optional[str] = None) -> ControlReport:
    started = time.perf_counter()
    hypothesis = thm1_hypothesis(G, H, S, p, filter)
    conclusion = fusion_equal(G, H, S, p)
    checks = {"forced_filter": True} if filter else {}
    return _report(TheoremIds["THM1"], p, _orders(G, H, S, hyperfocal_puig(G, S, p)), hypothesis, conclusion, started, checks=checks)


def _ambient_handle(G: GroupLike, emb: np.ndarray, K: SubgroupHandle) -> SubgroupHandle:
    return subgroup_from_indices(as_subgroup(G).parent, emb[K.members])


def essential_local_family(G: GroupLike, S: SubgroupHandle, p: int) -> List[SubgroupHandle]:
    """Abelian A of exponent p or 4 inside [P, O^p(Aut_G(P))], P over essential classes and S."""
    wanted = _default_thm1_filter(p)
    seen: Dict[int, SubgroupHandle] = {}
    for P in essential_classes(G, S, p) + [S]:
        setup = automizer_setup(G, P, p)
        T = commutator_with_auts(setup.P, op_residual(setup.G, p))
        for A in enumerate_subgroups(_ambient_handle(G, setup.embedding, T), wanted, p=p):
            seen.setdefault(A.mask, A)
    return sorted(seen.values(), key=lambda K: K.sort_key)


def thm1_essential_local_hypothesis(G: GroupLike, H: GroupLike, S: SubgroupHandle, p: int) -> Tuple[bool, Optional[HypothesisWitness]]:
    p = check_prime(p)
    check_fusion_pair(G, H, S, p)
    w = compare_family(G, H, essential_local_family(G, S, p), S)
    return w is None, w


def thm1_essential_local_validate(G: GroupLike, H: GroupLike, S: SubgroupHandle, p: int) -> ControlReport:
    started = time.perf_counter()
    hypothesis = thm1_essential_local_hypothesis(G, H, S, p)
    conclusion = fusion_equal(G, H, S, p)
    orders = _orders(G, H, S, hyperfocal_puig(G, S, p))
    return _report(TheoremIds["THM1_ESSENTIAL_LOCAL"], p, orders, hypothesis, conclusion, started)


def thm2_validate(G: GroupLike, S: SubgroupHandle, p: int, variant: str = "normalizer") -> ControlReport:
    """Control of the cyclic subgroups of order p or 4 by N_G(S) (or by S) against full control."""
    started = time.perf_counter()
    p = check_prime(p)
    if variant not in ("normalizer", "inner"):
        raise PreconditionViolated(f"unknown variant {variant!r}")
    H0 = normalizer(G, S) if variant == "normalizer" else S
    check_fusion_pair(G, H0, S, p)
    hyp = hyperfocal_puig(G, S, p)
    family = enumerate_subgroups(hyp, SubgroupFilters["CYCLIC_P_OR_4"], p=p)
    w = compare_family(G, H0, family, hyp)
    conclusion = fusion_equal(G, H0, S, p)
    checks: Dict[str, Optional[Union[bool, int]]] = {}
    if variant == "inner":
        checks["frobenius_agrees"] = conclusion.equal == is_p_nilpotent(G, p)
    theorem_id = TheoremIds["THM2_NORMALIZER"] if variant == "normalizer" else TheoremIds["THM2_INNER"]
    return _report(theorem_id, p, _orders(G, H0, S, hyp), (w is None, w), conclusion, started, checks=checks)


def _compose(outer: MapTable, inner: MapTable, domain: np.ndarray) -> MapTable:
    """outer o inner, where inner maps `domain` into outer's domain (both given on sorted members)."""
    return tuple(outer[int(np.searchsorted(domain, x))] for x in inner)


def _invert(table: MapTable, domain: np.ndarray) -> Dict[int, int]:
    return {int(b): int(a) for a, b in zip(domain.tolist(), table)}


def _step4_rederive(G: GroupLike, H: GroupLike, family: List[SubgroupHandle], within: SubgroupHandle) -> bool:
    """Hom_G(A, A') = Hom_H(A, A') via phi = psi o (psi^-1 phi) with psi in Hom_H and psi^-1 phi in Aut_H(A)."""
    for A in family:
        a = A.members
        auts_h = hom_images(H, A, A).get(A.key)
        auts_h = auts_h.maps if auts_h is not None else frozenset()
        from_h = hom_images(H, A, within)
        for key, hs in hom_images(G, A, within).items():
            theirs = from_h.get(key)
            if theirs is None:
                return False
            psi = min(theirs.maps)
            psi_inv = _invert(psi, a)
            for phi in hs.maps:
                chi = tuple(psi_inv[x] for x in phi)
                if chi not in auts_h or _compose(psi, chi, a) not in theirs.maps:
                    return False
    return True


def conj_automizer_hypothesis(G: GroupLike, H: GroupLike, S: SubgroupHandle, p: int) -> Tuple[bool, Optional[HypothesisWitness], List[SubgroupHandle]]:
    """For elementary abelian A, A' in the hyperfocal subgroup: G-conjugate implies H-conjugate,
    and Aut_G(A) = Aut_H(A)."""
    hyp = hyperfocal_puig(G, S, p)
    family = enumerate_subgroups(hyp, SubgroupFilters["ELEMENTARY_ABELIAN"], p=p)
    for A in family:
        under_h = hom_images(H, A, hyp)
        for key, hs in hom_images(G, A, hyp).items():
            if key not in under_h:
                return False, HypothesisWitness(A, hs.codomain, None, "conjugacy"), family
        aut_g, aut_h = len(hom_set(G, A, A)), len(hom_set(H, A, A))
        if aut_g != aut_h:
            return False, HypothesisWitness(A, A, None, "automizer", {"aut_G": aut_g, "aut_H": aut_h}), family
    return True, None, family


def conj_automizer_control(G: GroupLike, H: GroupLike, S: SubgroupHandle, p: int) -> ControlReport:
    started = time.perf_counter()
    p = check_prime(p)
    check_fusion_pair(G, H, S, p)
    in_scope, note = True, None
    if p == 2:
        in_scope, note = False, "outside theorem scope: stated for odd primes"
        warn("CONJ_AUTOMIZER_P2: computed for p = 2, outside the stated scope")
    holds, witness, family = conj_automizer_hypothesis(G, H, S, p)
    hyp = hyperfocal_puig(G, S, p)
    checks: Dict[str, Optional[Union[bool, int]]] = {"step4_rederived": None, "step4_direct": None}
    if holds:
        checks["step4_rederived"] = _step4_rederive(G, H, family, hyp)
        checks["step4_direct"] = compare_family(G, H, family, hyp) is None
    conclusion = fusion_equal(G, H, S, p)
    return _report(TheoremIds["CONJ_AUTOMIZER"], p, _orders(G, H, S, hyp), (holds, witness), conclusion, started,
                   in_scope=in_scope, note=note, checks=checks)


def _automizers_agree_above(G: GroupLike, H: GroupLike, S: SubgroupHandle, P: SubgroupHandle) -> bool:
    NSP = normalizer(S, P)
    for R in enumerate_subgroups(NSP):
        if P < R and len(hom_set(G, R, R)) != len(hom_set(H, R, R)):
            return False
    return True


def main_lemma_verify(G: GroupLike, H: GroupLike, S: SubgroupHandle, p: int, P: SubgroupHandle, Q: SubgroupHandle) -> bool:
    """Aut_G(P) = <Aut_H(P), C_{Aut_G(P)}(Q)> once every precondition has been checked."""
    p = check_prime(p)
    check_fusion_pair(G, H, S, p)
    if not P <= S:
        raise PreconditionViolated("p_in_s: P is not contained in S")
    if not is_fully_normalized(G, S, P, p):
        raise PreconditionViolated("fully_normalized: P is not fully normalized")
    if not is_centric(G, S, P, p):
        raise PreconditionViolated("centric: P is not centric")
    if not _automizers_agree_above(G, H, S, P):
        raise PreconditionViolated("automizers_above: Aut_H(R) != Aut_G(R) for some P < R <= N_S(P)")
    if not Q <= P or not is_normal(P, Q):
        raise PreconditionViolated("q_normal: Q is not normal in P")
    if compare_family(G, H, [Q], S) is not None:
        raise PreconditionViolated("q_hom_equal: Hom_G(Q, S) != Hom_H(Q, S)")
    autz = aut_group(G, P)
    from_h = autz.image(normalizer(H, P))
    qpos = np.searchsorted(P.members, Q.members)
    perms = autz.aut.perms.astype(np.intp)
    fixing = np.flatnonzero(np.all(perms[:, qpos] == qpos, axis=1))
    generated = subgroup_generated(autz.aut, list(from_h.generators) + fixing.tolist())
    return generated.order == autz.aut.order


def main_lemma_instances(G: GroupLike, H: GroupLike, S: SubgroupHandle, p: int) -> List[Tuple[SubgroupHandle, SubgroupHandle]]:
    """Every (P, Q) meeting the lemma's preconditions, P over fully normalized class representatives."""
    p = check_prime(p)
    check_fusion_pair(G, H, S, p)
    out: List[Tuple[SubgroupHandle, SubgroupHandle]] = []
    for rep in subgroup_classes(G, S):
        cls = conjugates_in(G, rep, S)
        best = max(normalizer(S, R).order for R in cls)
        P = next(R for R in cls if normalizer(S, R).order == best)
        if not is_centric(G, S, P, p) or not _automizers_agree_above(G, H, S, P):
            continue
        for Q in enumerate_subgroups(P):
            if is_normal(P, Q) and compare_family(G, H, [Q], S) is None:
                out.append((P, Q))
    return out
