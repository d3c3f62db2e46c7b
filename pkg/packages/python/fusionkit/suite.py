"""Per-entry acceptance checks over the corpus."""

from __future__ import annotations
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union
import logging
import warnings

from .control import (
    conj_automizer_control,
    main_lemma_instances,
    main_lemma_verify,
    thm1_essential_local_validate,
    thm1_hypothesis,
    thm1_validate,
    thm2_validate,
)
from .corpus import CorpusEntry, corpus_pairs, load_manifest, measured_values
from .critical import automizer_setup, find_thompson_D
from .errors import FusionKitError
from .fusion import essential_classes
from .pstructure import hyperfocal_fusion, hyperfocal_puig

logger = logging.getLogger(__name__)

# main lemma instances are only checked against the first pairs of each prime
MAIN_LEMMA_PAIRS = 3


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: Optional[str] = None


@dataclass
class EntryResult:
    name: str
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.ok]

    def add(self, name: str, ok: bool, detail: Optional[str] = None) -> None:
        if not ok:
            logger.warning("%s: check %s failed%s", self.name, name, f" ({detail})" if detail else "")
        self.checks.append(CheckResult(name, bool(ok), detail))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "ok": self.ok,
            "checks": len(self.checks),
            "failures": [{"check": c.name, "detail": c.detail} for c in self.failures()],
        }


@dataclass
class SuiteReport:
    entries: List[EntryResult] = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(1 for e in self.entries if e.ok)

    @property
    def failed(self) -> int:
        return len(self.entries) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0 and bool(self.entries)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "entries": [e.to_dict() for e in self.entries],
            "summary": {"entries": len(self.entries), "passed": self.passed, "failed": self.failed},
        }


def _check_expected(entry: CorpusEntry, result: EntryResult) -> None:
    measured = measured_values(entry)
    for key, exp in sorted(entry.expected.items()):
        got = measured.get(key)
        result.add(f"expected:{key}", got == exp.value, None if got == exp.value else f"expected {exp.value} ({exp.provenance}), got {got}")


def _check_prime(entry: CorpusEntry, p: int, result: EntryResult) -> None:
    G = entry.group
    S, pairs = corpus_pairs(entry, p)
    tag = f"p{p}"
    result.add(f"puig:{tag}", hyperfocal_fusion(G, S, p) == hyperfocal_puig(G, S, p))

    ess = essential_classes(G, S, p)
    normalizer_report = thm2_validate(G, S, p, "normalizer")
    result.add(f"thm2_normalizer:{tag}", normalizer_report.implication_ok)
    if normalizer_report.hypothesis_holds:
        result.add(f"normalizer_no_essentials:{tag}", not ess, f"{len(ess)} essential classes" if ess else None)
    inner = thm2_validate(G, S, p, "inner")
    result.add(f"thm2_inner:{tag}", inner.implication_ok)
    result.add(f"frobenius:{tag}", bool(inner.checks.get("frobenius_agrees")))

    certificate = find_thompson_D(automizer_setup(G, S, p))
    result.add(f"thompson:{tag}", certificate.ok)
    for k, Q in enumerate(ess):
        local = find_thompson_D(automizer_setup(G, Q, p))
        result.add(f"thompson:{tag}:essential{k}", local.ok, None if local.ok else f"essential subgroup of order {Q.order}")

    for k, (label, H) in enumerate(pairs):
        where = f"{tag}:{label}"
        result.add(f"thm1:{where}", thm1_validate(G, H, S, p).implication_ok)
        result.add(f"thm1_essential_local:{where}", thm1_essential_local_validate(G, H, S, p).implication_ok)
        if p != 2:
            r = conj_automizer_control(G, H, S, p)
            result.add(f"conj_automizer:{where}", r.implication_ok)
            if r.hypothesis_holds:
                result.add(f"conj_automizer_step4:{where}", bool(r.checks.get("step4_rederived")) and bool(r.checks.get("step4_direct")))
                result.add(f"conj_automizer_implies_thm1:{where}", thm1_hypothesis(G, H, S, p)[0])
        if k < MAIN_LEMMA_PAIRS:
            instances = main_lemma_instances(G, H, S, p)
            bad = [(P.order, Q.order) for P, Q in instances if not main_lemma_verify(G, H, S, p, P, Q)]
            result.add(f"main_lemma:{where}", not bad, f"failing (|P|, |Q|): {bad}" if bad else None)


def run_entry(entry: CorpusEntry) -> EntryResult:
    result = EntryResult(entry.name)
    _check_expected(entry, result)
    for p in entry.primes:
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                _check_prime(entry, p, result)
        except FusionKitError as e:
            result.add(f"error:p{p}", False, str(e))
    logger.info("%s: %d checks, %d failed", entry.name, len(result.checks), len(result.failures()))
    return result


def run_named(manifest: Optional[Union[str, Path]], name: str, cap: Optional[int] = None) -> EntryResult:
    """Load one manifest entry and run it; the unit of work for parallel runs."""
    try:
        entries = load_manifest(manifest, verify=False, cap=cap, names=[name])
    except FusionKitError as e:
        return EntryResult(name, [CheckResult("load", False, str(e))])
    return run_entry(entries[0])


def run_suite(entries: List[CorpusEntry]) -> SuiteReport:
    return SuiteReport([run_entry(e) for e in entries])
