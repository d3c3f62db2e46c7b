"""fusionkit command line: analyze, check-control, family, corpus."""

from __future__ import annotations
from concurrent.futures import ProcessPoolExecutor
from fnmatch import fnmatch
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence
import argparse
import logging
import sys

from sympy import primefactors

from . import _log
from .constants import ExitCodes, max_order
from .control import ControlReport, conj_automizer_control, thm1_essential_local_validate, thm1_validate, thm2_validate
from .corpus import build_agl_family, build_sl23, manifest_names, verify_agl_claims, verify_sl23_quillen
from .critical import automizer_setup, find_thompson_D
from .errors import (
    CapExceeded,
    ClaimFailed,
    FusionKitError,
    GroupFormatError,
    InvalidPermutation,
    NotFound,
    PNotPrime,
    PreconditionViolated,
)
from .fusion import essential_classes
from .group import GroupTable, SubgroupHandle, normalizer, subgroup_generated
from .groupfile import format_group_file, load_group_file
from .perm import Permutation
from .pstructure import check_prime, plocal_profile, sylow_p
from .report import (
    AnalysisReport,
    PrimeAnalysis,
    canonical_json,
    certificate_dict,
    control_dict,
    hypothesis_witness_dict,
    render_analysis,
    render_claims,
    render_control_dict,
)
from .suite import EntryResult, SuiteReport, run_named

logger = logging.getLogger(__name__)

THEOREMS = ("thm1", "thm1-local", "thm2", "conj-aut")


def _emit(args: argparse.Namespace, data: Any, text: Callable[[], str]) -> None:
    if args.format == "json":
        sys.stdout.write(canonical_json(data) + "\n")
    else:
        sys.stdout.write(text() + "\n")


def _load(args: argparse.Namespace) -> GroupTable:
    return load_group_file(args.group_file, cap=max_order(args.max_order))


def _primes(G: GroupTable, requested: Optional[List[int]]) -> List[int]:
    if requested:
        return [check_prime(p) for p in requested]
    return [int(p) for p in primefactors(G.order)]


def cmd_analyze(args: argparse.Namespace) -> int:
    G = _load(args)
    report = AnalysisReport(Path(args.group_file).stem, G.order, G.degree)
    for p in _primes(G, args.prime):
        profile = plocal_profile(G, p)
        essential = essential_classes(G, profile.sylow, p) if profile.sylow.order > 1 else []
        certificate = None
        if args.critical and profile.sylow.order > 1:
            setup = automizer_setup(G, profile.sylow, p)
            certificate = certificate_dict(find_thompson_D(setup), setup.embedding)
        report.primes.append(PrimeAnalysis.from_profile(profile, essential, certificate))
        if profile.sylow.order > 1:
            for variant in ("normalizer", "inner"):
                report.controls.append(control_dict(thm2_validate(G, profile.sylow, p, variant), timings=args.timings))
    _emit(args, report.to_dict(), lambda: render_analysis(report))
    ok = all(c["implication_ok"] for c in report.controls)
    return ExitCodes["OK"] if ok else ExitCodes["IMPLICATION_VIOLATED"]


def _parse_generator(token: str, G: GroupTable) -> int:
    token = token.strip()
    if token.isdigit():
        i = int(token)
        if i >= G.order:
            raise InvalidPermutation(f"element index {i} out of range")
        return i
    return G.index_of(Permutation.parse(token, G.degree))


def _control_subgroup(args: argparse.Namespace, G: GroupTable, S: SubgroupHandle) -> SubgroupHandle:
    if args.inner:
        return S
    if args.normalizer:
        return normalizer(G, S)
    if args.subgroup:
        return subgroup_generated(G, [_parse_generator(t, G) for t in args.subgroup])
    return G.whole()


def _run_theorem(theorem: str, args: argparse.Namespace, G: GroupTable, p: int) -> List[ControlReport]:
    if theorem == "thm2":
        if args.subgroup:
            raise PreconditionViolated("thm2 fixes H; use --normalizer or --inner")
        S = sylow_p(G, p)
        if args.inner:
            return [thm2_validate(G, S, p, "inner")]
        if args.normalizer:
            return [thm2_validate(G, S, p, "normalizer")]
        return [thm2_validate(G, S, p, "normalizer"), thm2_validate(G, S, p, "inner")]
    S = sylow_p(G, p)
    H = _control_subgroup(args, G, S)
    if args.subgroup:
        # S must be a Sylow subgroup of G inside H
        S = sylow_p(H, p)
    if theorem == "thm1":
        return [thm1_validate(G, H, S, p)]
    if theorem == "thm1-local":
        return [thm1_essential_local_validate(G, H, S, p)]
    return [conj_automizer_control(G, H, S, p)]


def cmd_check_control(args: argparse.Namespace) -> int:
    G = _load(args)
    p = check_prime(args.prime)
    reports = _run_theorem(args.theorem, args, G, p)
    dicts = [control_dict(r, timings=args.timings) for r in reports]
    _emit(args, dicts if len(dicts) > 1 else dicts[0], lambda: "\n".join(render_control_dict(d) for d in dicts))
    ok = all(r.implication_ok for r in reports)
    return ExitCodes["OK"] if ok else ExitCodes["IMPLICATION_VIOLATED"]


def _family_agl(args: argparse.Namespace) -> int:
    fam = build_agl_family(args.p, args.n, cap=args.max_order)
    if args.emit_group_file:
        gens = [fam.G.element(g) for g in fam.G.generators]
        comment = f"affine semilinear maps on F_{fam.field.order}"
        Path(args.emit_group_file).write_text(format_group_file(fam.G.degree, gens, comment), encoding="utf-8")
    facts: Dict[str, Any] = {"p": fam.p, "n": fam.n, "orders": {"G": fam.G.order, "H": fam.H.order, "S": fam.S.order, "D": fam.D.order}}
    if not args.validate:
        _emit(args, facts, lambda: render_claims(f"AGammaL(1,{fam.field.order})", facts["orders"], {}))
        return ExitCodes["OK"]
    claims = verify_agl_claims(args.p, args.n, fam)
    facts.update(
        orders=claims.orders,
        order_p_subgroups=claims.order_p_subgroups,
        hom_h_sizes=claims.hom_h_sizes,
        hyperfocal_order=claims.hyperfocal_order,
        order_p_control=claims.order_p_control,
        full_control=claims.full_control,
        claims=claims.claims,
    )
    flat = {k: v for k, v in facts.items() if k not in ("claims", "orders")}
    flat.update({f"|{k}|": v for k, v in claims.orders.items()})
    _emit(args, facts, lambda: render_claims(f"AGammaL(1,{fam.field.order})", flat, claims.claims))
    return ExitCodes["OK"]


def _family_sl23(args: argparse.Namespace) -> int:
    G, S = build_sl23()
    if args.emit_group_file:
        gens = [G.element(g) for g in G.generators]
        Path(args.emit_group_file).write_text(format_group_file(G.degree, gens, "SL(2,3) on nonzero vectors of F_3^2"), encoding="utf-8")
    facts: Dict[str, Any] = {"orders": {"G": G.order, "S": S.order}}
    if not args.validate:
        _emit(args, facts, lambda: render_claims("SL(2,3)", facts["orders"], {}))
        return ExitCodes["OK"]
    q = verify_sl23_quillen()
    facts.update(
        involutions=q.involutions,
        center_order=q.center_order,
        elementary_abelian_hypothesis=q.elementary_abelian_hypothesis,
        exponent_four_hypothesis=q.exponent_four_hypothesis,
        witness=hypothesis_witness_dict(q.witness),
        fusion_equal=q.fusion.equal,
        claims=q.claims,
    )
    flat = {k: v for k, v in facts.items() if k not in ("claims", "orders", "witness")}
    _emit(args, facts, lambda: render_claims("SL(2,3)", flat, q.claims))
    return ExitCodes["OK"]


def cmd_family(args: argparse.Namespace) -> int:
    if args.family == "agl":
        return _family_agl(args)
    return _family_sl23(args)


def _render_suite(report: SuiteReport) -> str:
    lines = []
    for e in report.entries:
        lines.append(f"{'PASS' if e.ok else 'FAIL'}  {e.name}  ({len(e.checks)} checks)")
        for c in e.failures():
            lines.append(f"      {c.name}" + (f": {c.detail}" if c.detail else ""))
    lines.append(f"{report.passed} passed, {report.failed} failed, {len(report.entries)} entries")
    return "\n".join(lines)


def run_corpus(manifest: Optional[str], pattern: Optional[str], jobs: int, cap: Optional[int]) -> SuiteReport:
    names = [n for n in manifest_names(manifest) if pattern is None or fnmatch(n, pattern)]
    if jobs > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(run_named, manifest, n, cap) for n in names]
            results: List[EntryResult] = [f.result() for f in futures]
    else:
        results = [run_named(manifest, n, cap) for n in names]
    return SuiteReport(results)


def cmd_corpus(args: argparse.Namespace) -> int:
    report = run_corpus(args.manifest, args.filter, args.jobs, args.max_order)
    _emit(args, report.to_dict(), lambda: _render_suite(report))
    return ExitCodes["OK"] if report.ok else ExitCodes["IMPLICATION_VIOLATED"]


def _add_format(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "json"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fusionkit", description="Fusion and hyperfocal subgroups of finite permutation groups")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING (default) or ERROR")
    parser.add_argument("--max-order", type=int, default=None, help="group enumeration cap (env FUSIONKIT_MAX_ORDER)")
    parser.add_argument("--timings", action="store_true", help="include elapsed_ms in control reports")
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="p-local profile and essential subgroups")
    a.add_argument("group_file")
    a.add_argument("--prime", type=int, action="append", help="repeatable; default all primes dividing |G|")
    a.add_argument("--critical", action="store_true", help="also certify a critical subgroup of the Sylow")
    _add_format(a)
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("check-control", help="hypothesis, conclusion and implication of a control theorem")
    c.add_argument("group_file")
    c.add_argument("--prime", type=int, required=True)
    c.add_argument("--theorem", choices=THEOREMS, default="thm1")
    h = c.add_mutually_exclusive_group()
    h.add_argument("--subgroup", action="append", metavar="GEN", help="generator of H: element index or permutation; repeatable")
    h.add_argument("--normalizer", action="store_true", help="H = N_G(S)")
    h.add_argument("--inner", action="store_true", help="H = S")
    _add_format(c)
    c.set_defaults(func=cmd_check_control)

    f = sub.add_parser("family", help="build and validate the example families")
    fam = f.add_subparsers(dest="family", required=True)
    agl = fam.add_parser("agl", help="affine semilinear group on F_{p^n}")
    agl.add_argument("--p", type=int, required=True)
    agl.add_argument("--n", type=int, required=True)
    sl = fam.add_parser("sl23", help="SL(2,3) with its quaternion Sylow 2-subgroup")
    for q in (agl, sl):
        q.add_argument("--validate", action="store_true")
        q.add_argument("--emit-group-file", metavar="PATH")
        _add_format(q)
    f.set_defaults(func=cmd_family)

    r = sub.add_parser("corpus", help="corpus acceptance suite")
    rs = r.add_subparsers(dest="corpus_command", required=True)
    run = rs.add_parser("run")
    run.add_argument("--filter", metavar="GLOB", default=None)
    run.add_argument("--jobs", type=int, default=1)
    run.add_argument("--manifest", default=None)
    _add_format(run)
    r.set_defaults(func=cmd_corpus)
    return parser


def _exit_code(err: FusionKitError) -> int:
    if isinstance(err, (GroupFormatError, InvalidPermutation)):
        return ExitCodes["PARSE_ERROR"]
    if isinstance(err, CapExceeded):
        return ExitCodes["CAP_EXCEEDED"]
    if isinstance(err, PNotPrime):
        return ExitCodes["INVALID_PRIME"]
    if isinstance(err, (ClaimFailed, NotFound)):
        return ExitCodes["IMPLICATION_VIOLATED"]
    return ExitCodes["PRECONDITION"]


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _log.configure(args.log_level)
        return int(args.func(args))
    except FusionKitError as e:
        sys.stderr.write(f"error: {e}\n")
        return _exit_code(e)
    except OSError as e:
        sys.stderr.write(f"error: {e}\n")
        return ExitCodes["PARSE_ERROR"]


if __name__ == "__main__":
    sys.exit(main())
