import json

import numpy as np
import pytest

from fusionkit.control import thm1_validate, thm2_validate
from fusionkit.corpus import build_sl23
from fusionkit.critical import automizer_setup, find_thompson_D
from fusionkit.fusion import essential_classes
from fusionkit.pstructure import plocal_profile
from fusionkit.report import (
    AnalysisReport,
    PrimeAnalysis,
    canonical_json,
    certificate_dict,
    control_dict,
    render_analysis,
    render_control_dict,
)


def test_canonical_json_is_compact_and_sorted():
    data = {"b": np.int64(2), "a": [1.23456, (np.int32(3), None)], "c": {"z": True, "y": "x"}}
    assert canonical_json(data) == '{"a":[1.235,[3,null]],"b":2,"c":{"y":"x","z":true}}'
    with pytest.raises(TypeError):
        canonical_json({"a": object()})


def _sl23_report():
    G, S = build_sl23()
    report = AnalysisReport("sl23", G.order, G.degree)
    for p in (2, 3):
        profile = plocal_profile(G, p)
        setup = automizer_setup(G, profile.sylow, p)
        cert = certificate_dict(find_thompson_D(setup), setup.embedding)
        report.primes.append(PrimeAnalysis.from_profile(profile, essential_classes(G, profile.sylow, p), cert))
    return report


def test_analysis_report_round_trip():
    report = _sl23_report()
    d = report.to_dict()
    assert [pa["prime"] for pa in d["primes"]] == [2, 3]
    assert d["primes"][0]["orders"] == {"sylow": 8, "op_residual": 24, "hyperfocal": 8, "focal": 8}
    assert d["primes"][1]["orders"]["hyperfocal"] == 1 and d["primes"][1]["is_p_nilpotent"]
    assert d["primes"][0]["certificate"]["order"] == 8
    assert d["primes"][0]["certificate"]["D_ambient"] == d["primes"][0]["sylow"]
    again = AnalysisReport.from_dict(json.loads(report.to_json()))
    assert again.to_json() == report.to_json()


def test_analysis_report_is_deterministic():
    assert _sl23_report().to_json() == _sl23_report().to_json()


def test_missing_certificate_is_dropped():
    G, S = build_sl23()
    report = AnalysisReport("sl23", G.order, G.degree, [PrimeAnalysis.from_profile(plocal_profile(G, 2))])
    assert "certificate" not in report.to_dict()["primes"][0]
    assert "essential    none" in render_analysis(report)


def test_control_dict_timings_and_witnesses():
    G, S = build_sl23()
    r = thm1_validate(G, S, S, 2)
    d = control_dict(r)
    assert "elapsed_ms" not in d
    assert "elapsed_ms" in control_dict(r, timings=True)
    assert d["theorem_id"] == "thm1" and d["prime"] == 2
    assert d["implication_ok"] and d["in_scope"]
    w = d["hypothesis"]["witness"]
    assert len(w["A"]) == 4 and len(w["map"]) == 4 and w["reason"] == "hom"
    assert [a for a, _ in w["map"]] == w["A"]
    c = d["conclusion"]["witness"]
    assert sorted(b for _, b in c["map"]) == c["codomain"]
    text = render_control_dict(d)
    assert text.startswith("thm1 at p = 2 (|G|=24, |H|=8, |S|=8, |hyperfocal|=8)")
    assert "implication  ok" in text


def test_control_dict_checks():
    G, S = build_sl23()
    d = control_dict(thm2_validate(G, S, 2, "inner"))
    assert d["checks"] == {"frobenius_agrees": True}
    assert "check frobenius_agrees" in render_control_dict(d)
    assert "checks" not in control_dict(thm2_validate(G, S, 2, "normalizer"))
