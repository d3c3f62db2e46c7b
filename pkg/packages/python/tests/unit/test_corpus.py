import json

import pytest

from fusionkit.corpus import (
    build_agl_family,
    build_gl23,
    build_sl23,
    builtin_corpus,
    corpus_pairs,
    dihedral,
    direct_product,
    load_manifest,
    manifest_names,
    measured_values,
    metacyclic,
    quaternion,
    semidihedral,
    verify_agl_claims,
    verify_sl23_quillen,
)
from fusionkit.errors import CapExceeded, ClaimFailed, GroupFormatError, PNotPrime, PreconditionViolated
from fusionkit.group import center, enumerate_group, is_abelian


def test_semilinear_claims_over_f9():
    c = verify_agl_claims(3, 2)
    assert c.orders == {"G": 144, "H": 72, "S": 9, "D": 8, "D_hat": 16}
    assert c.order_p_subgroups == 4
    assert c.hom_h_sizes == [2]
    assert c.hyperfocal_order == 9
    assert c.order_p_control and not c.full_control
    assert all(c.claims.values())
    assert c.fusion.witness is not None


def test_semilinear_claims_over_f8():
    c = verify_agl_claims(2, 3)
    assert c.orders["G"] == 168 and c.orders["S"] == 8
    assert c.order_p_subgroups == 7
    assert c.hom_h_sizes == [1]
    assert c.order_p_control and not c.full_control


@pytest.mark.slow
def test_semilinear_claims_over_f81():
    c = verify_agl_claims(3, 4, cap=30000)
    assert c.orders["G"] == 81 * 80 * 4
    assert c.order_p_subgroups == 40
    assert c.order_p_control and not c.full_control


def test_semilinear_family_layout():
    fam = build_agl_family(3, 2)
    G, H, S = fam
    assert G is fam.G and H == fam.H and S == fam.S
    assert fam.D.order == 8 and fam.sigma not in fam.H
    assert G.element(fam.sigma).order() == 2


@pytest.mark.parametrize("p,n", [(4, 2), (3, 1), (2, 2), (3, 3), (2, 10)])
def test_semilinear_family_rejects(p, n):
    with pytest.raises(PreconditionViolated):
        build_agl_family(p, n)


def test_semilinear_family_respects_order_cap(monkeypatch):
    with pytest.raises(CapExceeded):
        build_agl_family(3, 2, cap=100)
    assert build_agl_family(3, 2, cap=144).G.order == 144
    monkeypatch.setenv("FUSIONKIT_MAX_ORDER", "100")
    with pytest.raises(CapExceeded):
        build_agl_family(3, 2)
    with pytest.raises(CapExceeded):
        verify_agl_claims(2, 3)
    with pytest.raises(CapExceeded):
        build_agl_family(2, 9)
    with pytest.raises(CapExceeded):
        load_manifest(names=["agl-AGammaL(1,9)"])


def test_sl23_quillen_example():
    r = verify_sl23_quillen()
    assert (r.order, r.sylow_order, r.involutions, r.center_order, r.quotient_order) == (24, 8, 1, 2, 12)
    assert r.elementary_abelian_hypothesis and not r.exponent_four_hypothesis
    assert not r.fusion.equal
    assert all(r.claims.values())


def test_matrix_groups():
    G, S = build_sl23()
    assert G.degree == 8 and S.order == 8
    assert center(G).order == 2
    assert build_gl23().order == 48


def test_builtin_constructors():
    assert enumerate_group(*dihedral(8)).order == 8
    assert enumerate_group(*quaternion(16)).order == 16
    sd = enumerate_group(*semidihedral(16))
    assert sd.order == 16 and not is_abelian(sd)
    assert enumerate_group(*metacyclic(7, 3, 2, 0)).order == 21
    assert enumerate_group(*direct_product(dihedral(8), ((2, []),))).order == 8
    with pytest.raises(PreconditionViolated):
        metacyclic(7, 3, 3, 0)


def test_default_manifest_loads_and_verifies():
    entries = builtin_corpus()
    names = [e.name for e in entries]
    assert names == manifest_names()
    assert len(names) == len(set(names)) == 22
    for e in entries:
        measured = measured_values(e)
        assert all(measured[k] == v.value for k, v in e.expected.items())
        assert all(v.provenance in ("TRIVIAL", "DERIVED", "LITERATURE") for v in e.expected.values())


def test_load_selected_entries():
    entries = load_manifest(names=["Q8", "S4"])
    assert [e.name for e in entries] == ["S4", "Q8"]
    agl = load_manifest(names=["agl-AGammaL(1,9)"])[0]
    assert agl.group.order == 144 and agl.subgroups["affine"].order == 72
    S, pairs = corpus_pairs(agl, 3)
    labels = [label for label, _ in pairs]
    assert labels[:4] == ["G", "N_G(S)", "S", "affine"]
    assert all(S <= H for _, H in pairs)


def _write_manifest(tmp_path, entries):
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps({"version": 1, "entries": entries}), encoding="utf-8")
    return path


def test_corrupted_expectation_is_caught(tmp_path):
    path = _write_manifest(tmp_path, [
        {"name": "C6", "builtin": "cyclic", "params": {"n": 6}, "primes": [2, 3],
         "expected": {"order": {"value": 7, "provenance": "TRIVIAL"}}},
    ])
    try:
        load_manifest(path)
        assert False, "expected failure"
    except ValueError as e:
        assert str(e).startswith("CLAIM_FAILED: C6: order: expected 7")
    assert load_manifest(path, verify=False)[0].group.order == 6


def test_manifest_file_entries(tmp_path):
    (tmp_path / "s3.grp").write_text("3\n(1 2 3)\n(1 2)\n", encoding="utf-8")
    path = _write_manifest(tmp_path, [
        {"name": "S3", "file": "s3.grp", "primes": [3],
         "expected": {"hyperfocal_order_p3": {"value": 3, "provenance": "DERIVED"}}},
    ])
    entry = load_manifest(path)[0]
    assert entry.source == "s3.grp" and entry.group.order == 6


def test_manifest_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(GroupFormatError):
        load_manifest(bad)
    with pytest.raises(PNotPrime):
        load_manifest(_write_manifest(tmp_path, [{"name": "C4", "builtin": "cyclic", "params": {"n": 4}, "primes": [4]}]))
    with pytest.raises(PreconditionViolated):
        load_manifest(_write_manifest(tmp_path, [{"name": "X", "builtin": "monster"}]))
    with pytest.raises(PreconditionViolated):
        load_manifest(_write_manifest(tmp_path, [{"name": "Y"}]))
    unknown = _write_manifest(tmp_path, [
        {"name": "C2", "builtin": "cyclic", "params": {"n": 2}, "primes": [2],
         "expected": {"mystery": {"value": 1}}},
    ])
    with pytest.raises(ClaimFailed):
        load_manifest(unknown)
