import json
import logging

import pytest

from fusionkit import cli


@pytest.fixture(autouse=True)
def _reset_logging():
    yield
    log = logging.getLogger("fusionkit")
    for h in list(log.handlers):
        log.removeHandler(h)
    log.propagate = True
    log.setLevel(logging.NOTSET)


@pytest.fixture
def s4_file(tmp_path):
    path = tmp_path / "s4.grp"
    path.write_text("# symmetric group\n4\n(1 2 3 4)\n(1 2)\n", encoding="utf-8")
    return str(path)


@pytest.fixture
def sl23_file(tmp_path, capsys):
    path = tmp_path / "sl23.grp"
    assert cli.main(["family", "sl23", "--emit-group-file", str(path)]) == 0
    capsys.readouterr()
    return str(path)


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_analyze_json(s4_file, capsys):
    assert cli.main(["analyze", s4_file, "--format", "json"]) == 0
    d = _json(capsys)
    assert (d["name"], d["order"], d["degree"]) == ("s4", 24, 4)
    two, three = d["primes"]
    assert two["orders"] == {"sylow": 8, "op_residual": 12, "hyperfocal": 4, "focal": 4}
    assert [len(Q) for Q in two["essential"]] == [4]
    assert three["prime"] == 3 and not three["is_p_nilpotent"]
    ids = [(c["prime"], c["theorem_id"]) for c in d["controls"]]
    assert ids == [(2, "thm2_normalizer"), (2, "thm2_inner"), (3, "thm2_normalizer"), (3, "thm2_inner")]
    assert all(c["implication_ok"] and "elapsed_ms" not in c for c in d["controls"])
    assert d["controls"][0]["group_orders"]["S"] == 8


def test_analyze_text_with_certificate(sl23_file, capsys):
    assert cli.main(["analyze", sl23_file, "--prime", "2", "--critical"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("group sl23: order 24, degree 8")
    assert "critical D   order 8  ok yes" in out
    assert "thm2_normalizer at p = 2" in out and "thm2_inner at p = 2" in out
    assert "p = 3" not in out


def test_check_control_text(sl23_file, capsys):
    assert cli.main(["check-control", sl23_file, "--prime", "2", "--inner"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("thm1 at p = 2")
    assert "hypothesis   no" in out and "implication  ok" in out
    assert "elapsed_ms" not in out


def test_check_control_thm2_reports_both_variants(sl23_file, capsys):
    assert cli.main(["--timings", "check-control", sl23_file, "--prime", "2", "--theorem", "thm2", "--format", "json"]) == 0
    normalizer, inner = _json(capsys)
    assert normalizer["theorem_id"] == "thm2_normalizer" and inner["theorem_id"] == "thm2_inner"
    assert normalizer["hypothesis"]["holds"] and not inner["hypothesis"]["holds"]
    assert "elapsed_ms" in normalizer


def test_check_control_subgroup_generators(s4_file, capsys):
    args = ["check-control", s4_file, "--prime", "2", "--subgroup", "(1 2 3 4)", "--subgroup", "(1 3)", "--format", "json"]
    assert cli.main(args) == 0
    d = _json(capsys)
    assert d["group_orders"]["H"] == 8 and d["implication_ok"]
    assert cli.main(["check-control", s4_file, "--prime", "3", "--subgroup", "1", "--subgroup", "2", "--theorem", "conj-aut"]) == 0
    assert cli.main(["check-control", s4_file, "--prime", "3", "--subgroup", "(1 2 3)", "--theorem", "conj-aut", "--format", "json"]) == 0
    d = json.loads(capsys.readouterr().out.splitlines()[-1])
    assert d["group_orders"]["H"] == 3 and not d["hypothesis"]["holds"]


def test_conj_aut_outside_scope_is_noted(sl23_file, capsys):
    with pytest.warns(UserWarning, match="CONJ_AUTOMIZER_P2"):
        assert cli.main(["check-control", sl23_file, "--prime", "2", "--theorem", "conj-aut"]) == 0
    assert "outside theorem scope" in capsys.readouterr().out


def test_family_agl_validate(tmp_path, capsys):
    path = tmp_path / "agl.grp"
    assert cli.main(["family", "agl", "--p", "3", "--n", "2", "--validate", "--format", "json", "--emit-group-file", str(path)]) == 0
    d = _json(capsys)
    assert d["orders"]["G"] == 144 and d["hom_h_sizes"] == [2]
    assert all(d["claims"].values())
    assert cli.main(["analyze", str(path), "--prime", "3", "--format", "json"]) == 0
    assert _json(capsys)["order"] == 144


def test_family_sl23_validate_text(capsys):
    assert cli.main(["family", "sl23", "--validate"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("SL(2,3)")
    assert "FAIL" not in out


def test_corpus_run_filter(capsys):
    assert cli.main(["corpus", "run", "--filter", "S3", "--format", "json"]) == 0
    d = _json(capsys)
    assert d["summary"] == {"entries": 1, "passed": 1, "failed": 0}
    assert d["entries"][0]["name"] == "S3"


def test_corpus_parallel_matches_serial(capsys):
    assert cli.main(["corpus", "run", "--filter", "S3*", "--format", "json"]) == 0
    serial = capsys.readouterr().out
    assert cli.main(["corpus", "run", "--filter", "S3*", "--jobs", "2", "--format", "json"]) == 0
    assert capsys.readouterr().out == serial


def test_corpus_failure_exit_code(tmp_path, capsys):
    manifest = tmp_path / "manifest.json"
    manifest.write_text(json.dumps({"entries": [
        {"name": "C6", "builtin": "cyclic", "params": {"n": 6}, "primes": [2, 3],
         "expected": {"order": {"value": 7, "provenance": "TRIVIAL"}}},
    ]}), encoding="utf-8")
    assert cli.main(["corpus", "run", "--manifest", str(manifest)]) == 1
    out = capsys.readouterr().out
    assert "FAIL  C6" in out and "expected:order" in out


def test_error_exit_codes(s4_file, sl23_file, tmp_path, capsys):
    bad = tmp_path / "bad.grp"
    bad.write_text("4\n(1 5)\n", encoding="utf-8")
    assert cli.main(["analyze", str(bad)]) == 2
    assert capsys.readouterr().err.startswith("error: GROUP_FORMAT: line 2:")
    assert cli.main(["analyze", str(tmp_path / "missing.grp")]) == 2
    assert cli.main(["--max-order", "10", "analyze", s4_file]) == 3
    assert "CAP_EXCEEDED" in capsys.readouterr().err
    assert cli.main(["check-control", s4_file, "--prime", "4"]) == 4
    assert "P_NOT_PRIME" in capsys.readouterr().err
    assert cli.main(["analyze", s4_file, "--prime", "6"]) == 4
    assert cli.main(["check-control", sl23_file, "--prime", "2", "--theorem", "thm2", "--subgroup", "1"]) == 5
    assert cli.main(["check-control", s4_file, "--prime", "2", "--subgroup", "999"]) == 2
    assert cli.main(["--log-level", "LOUD", "analyze", s4_file]) == 5
    assert cli.main(["family", "agl", "--p", "2", "--n", "2"]) == 5
    assert cli.main(["--max-order", "100", "family", "agl", "--p", "3", "--n", "2"]) == 3
    assert "CAP_EXCEEDED" in capsys.readouterr().err
    assert cli.main(["family", "agl", "--p", "3", "--n", "4"]) == 3


def test_usage_errors_exit_through_argparse(s4_file):
    with pytest.raises(SystemExit) as e:
        cli.main(["check-control", s4_file])
    assert e.value.code == 2
    with pytest.raises(SystemExit):
        cli.main(["check-control", s4_file, "--prime", "2", "--inner", "--normalizer"])
