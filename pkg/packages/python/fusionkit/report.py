"""Plain-data views of results and their canonical JSON / text renderings."""

from __future__ import annotations
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence
import json

import numpy as np

from .control import ControlReport, HypothesisWitness
from .critical import CriticalCertificate
from .fusion import HomWitness
from .group import SubgroupHandle
from .pstructure import PLocalProfile


def _deep_canonicalize(obj: Any) -> Any:
    if obj is None or isinstance(obj, (str, bool)):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return round(float(obj), 3)
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_deep_canonicalize(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): _deep_canonicalize(obj[k]) for k in sorted(obj.keys(), key=str)}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def canonical_json(obj: Any) -> str:
    return json.dumps(_deep_canonicalize(obj), separators=(",", ":"), sort_keys=True)


def members(H: SubgroupHandle) -> List[int]:
    return [int(x) for x in H.members]


def subgroup_dict(H: SubgroupHandle) -> Dict[str, Any]:
    return {"order": H.order, "members": members(H)}


def hom_witness_dict(w: Optional[HomWitness]) -> Optional[Dict[str, Any]]:
    if w is None:
        return None
    return {"subgroup": members(w.subgroup), "codomain": members(w.codomain), "map": [list(x) for x in w.pairs()]}


def hypothesis_witness_dict(w: Optional[HypothesisWitness]) -> Optional[Dict[str, Any]]:
    if w is None:
        return None
    out: Dict[str, Any] = {"A": members(w.A), "B": members(w.B), "reason": w.reason}
    if w.table is not None:
        out["map"] = [[int(a), int(b)] for a, b in zip(w.A.members.tolist(), w.table)]
    if w.detail:
        out["detail"] = dict(w.detail)
    return out


def control_dict(r: ControlReport, timings: bool = False) -> Dict[str, Any]:
    hypothesis: Dict[str, Any] = {"holds": r.hypothesis_holds}
    if r.hypothesis_witness is not None:
        hypothesis["witness"] = hypothesis_witness_dict(r.hypothesis_witness)
    conclusion: Dict[str, Any] = {"holds": r.conclusion_holds}
    if r.conclusion_witness is not None:
        conclusion["witness"] = hom_witness_dict(r.conclusion_witness)
    out: Dict[str, Any] = {
        "theorem_id": r.theorem_id,
        "prime": r.prime,
        "group_orders": dict(r.group_orders),
        "hypothesis": hypothesis,
        "conclusion": conclusion,
        "implication_ok": r.implication_ok,
        "in_scope": r.in_scope,
    }
    if r.checks:
        out["checks"] = dict(r.checks)
    if r.note:
        out["note"] = r.note
    if timings:
        out["elapsed_ms"] = r.elapsed_ms
    return out


def certificate_dict(c: CriticalCertificate, embedding: Optional[np.ndarray] = None) -> Dict[str, Any]:
    out: Dict[str, Any] = {
        "D": members(c.D),
        "order": c.D.order,
        "checks": dict(c.checks),
        "maximal_abelians": [
            {"members": members(a.subgroup), "is_normal_in_P": a.is_normal_in_P, "centralizer_is_p_group": a.centralizer_is_p_group}
            for a in c.maximal_abelians
        ],
        "series_stabilizer_is_p_group": c.series_stabilizer_is_p_group,
        "ok": c.ok,
    }
    if embedding is not None:
        out["D_ambient"] = [int(x) for x in np.sort(embedding[c.D.members])]
    return out


@dataclass
class PrimeAnalysis:
    prime: int
    sylow: List[int]
    op_residual: List[int]
    hyperfocal: List[int]
    focal: List[int]
    is_p_nilpotent: bool
    essential: List[List[int]] = field(default_factory=list)
    certificate: Optional[Dict[str, Any]] = None

    @classmethod
    def from_profile(cls, profile: PLocalProfile, essential: Sequence[SubgroupHandle] = (),
                     certificate: Optional[Dict[str, Any]] = None) -> "PrimeAnalysis":
        return cls(
            prime=profile.prime,
            sylow=members(profile.sylow),
            op_residual=members(profile.op_p_residual),
            hyperfocal=members(profile.hyperfocal),
            focal=members(profile.focal),
            is_p_nilpotent=profile.is_p_nilpotent,
            essential=[members(Q) for Q in essential],
            certificate=certificate,
        )

    def orders(self) -> Dict[str, int]:
        return {
            "sylow": len(self.sylow),
            "op_residual": len(self.op_residual),
            "hyperfocal": len(self.hyperfocal),
            "focal": len(self.focal),
        }


@dataclass
class AnalysisReport:
    name: str
    order: int
    degree: int
    primes: List[PrimeAnalysis] = field(default_factory=list)
    controls: List[Dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        for d, pa in zip(out["primes"], self.primes):
            d["orders"] = pa.orders()
            if d["certificate"] is None:
                del d["certificate"]
        return _deep_canonicalize(out)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "AnalysisReport":
        primes = []
        for d in data.get("primes", []):
            d = {k: v for k, v in d.items() if k != "orders"}
            primes.append(PrimeAnalysis(**d))
        return cls(data["name"], data["order"], data["degree"], primes, list(data.get("controls", [])))

    def to_json(self) -> str:
        return canonical_json(self.to_dict())


def _yes(flag: Optional[bool]) -> str:
    if flag is None:
        return "n/a"
    return "yes" if flag else "no"


def _set(xs: List[int]) -> str:
    return "{" + ", ".join(str(x) for x in xs) + "}"


def render_analysis(report: AnalysisReport) -> str:
    lines = [f"group {report.name}: order {report.order}, degree {report.degree}"]
    for pa in report.primes:
        o = pa.orders()
        lines.append(f"p = {pa.prime}")
        lines.append(f"  sylow        order {o['sylow']}  {_set(pa.sylow)}")
        lines.append(f"  O^p          order {o['op_residual']}")
        lines.append(f"  hyperfocal   order {o['hyperfocal']}  {_set(pa.hyperfocal)}")
        lines.append(f"  focal        order {o['focal']}  {_set(pa.focal)}")
        lines.append(f"  p-nilpotent  {_yes(pa.is_p_nilpotent)}")
        if pa.essential:
            for Q in pa.essential:
                lines.append(f"  essential    order {len(Q)}  {_set(Q)}")
        else:
            lines.append("  essential    none")
        if pa.certificate is not None:
            c = pa.certificate
            lines.append(f"  critical D   order {c['order']}  ok {_yes(c['ok'])}")
    for c in report.controls:
        lines.append(render_control_dict(c))
    return "\n".join(lines)


def render_control_dict(d: Dict[str, Any]) -> str:
    orders = ", ".join(f"|{k}|={v}" for k, v in sorted(d["group_orders"].items()))
    lines = [f"{d['theorem_id']} at p = {d['prime']} ({orders})"]
    hyp, conc = d["hypothesis"], d["conclusion"]
    lines.append(f"  hypothesis   {_yes(hyp['holds'])}")
    if "witness" in hyp:
        w = hyp["witness"]
        lines.append(f"    witness    {w['reason']}: A={_set(w['A'])} B={_set(w['B'])}")
        if "map" in w:
            lines.append("    map        " + " ".join(f"{a}->{b}" for a, b in w["map"]))
        for k, v in sorted(w.get("detail", {}).items()):
            lines.append(f"    {k:<10} {v}")
    lines.append(f"  conclusion   {_yes(conc['holds'])}")
    if "witness" in conc:
        w = conc["witness"]
        lines.append(f"    witness    Q={_set(w['subgroup'])}")
        lines.append("    map        " + " ".join(f"{a}->{b}" for a, b in w["map"]))
    lines.append(f"  implication  {'ok' if d['implication_ok'] else 'VIOLATED'}")
    if not d["in_scope"]:
        lines.append(f"  note         {d.get('note', 'outside theorem scope')}")
    for k, v in sorted(d.get("checks", {}).items()):
        lines.append(f"  check {k:<18} {_yes(v) if v is None or isinstance(v, bool) else v}")
    if "elapsed_ms" in d:
        lines.append(f"  elapsed_ms   {d['elapsed_ms']}")
    return "\n".join(lines)


def render_claims(title: str, facts: Dict[str, Any], claims: Dict[str, bool]) -> str:
    lines = [title]
    for k, v in sorted(facts.items()):
        lines.append(f"  {k:<24} {v}")
    for k, ok in sorted(claims.items()):
        lines.append(f"  claim {k:<28} {'pass' if ok else 'FAIL'}")
    return "\n".join(lines)
