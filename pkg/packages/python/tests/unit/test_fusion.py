import pytest

from fusionkit.corpus import build_agl_family, build_sl23, elementary_abelian, quaternion
from fusionkit.errors import ClaimFailed, PreconditionViolated
from fusionkit.fusion import (
    HomSet,
    aut_group,
    conjugates_in,
    essential_classes,
    fusion_equal,
    has_strongly_p_embedded,
    hom_images,
    hom_set,
    is_centric,
    is_essential,
    is_fully_normalized,
    is_radical,
    normalizer_system_group,
    subgroup_classes,
    sylow_graph_components,
)
from fusionkit.group import center, centralizer, enumerate_group, is_cyclic, normalizer
from fusionkit.perm import Permutation
from fusionkit.pstructure import enumerate_subgroups, is_p_nilpotent, op_core, op_residual, p_part, sylow_p


def sym(n):
    cycle = Permutation.from_cycles(n, [list(range(n))])
    return enumerate_group(n, [cycle, Permutation.from_cycles(n, [[0, 1]])])


def cyclic_fours(S):
    return [H for H in enumerate_subgroups(S, "cyclic_p_or_4") if H.order == 4]


def test_trivial_domain_has_one_map():
    G = sym(4)
    hs = hom_set(G, G.trivial(), sylow_p(G, 2))
    assert len(hs) == 1


def test_hom_sets_in_quaternion_and_sl23():
    Q8 = enumerate_group(*quaternion(8))
    i, j, _ = cyclic_fours(Q8.whole())
    assert len(hom_set(Q8, i, j)) == 0
    assert len(hom_set(Q8, i, i)) == 2
    G, S = build_sl23()
    a, b, _ = cyclic_fours(S)
    assert len(hom_set(G, a, b)) == 2
    assert len(hom_set(S, a, b)) == 0


def test_hom_sets_in_affine_group():
    fam = build_agl_family(3, 2)
    lines = [V for V in enumerate_subgroups(fam.S, "cyclic_p_or_4") if V.order == 3]
    assert len(lines) == 4
    for A in lines:
        for B in lines:
            assert len(hom_set(fam.H, A, B)) == 2


def test_hom_images_groups_by_image():
    G, S = build_sl23()
    a = cyclic_fours(S)[0]
    images = hom_images(G, a, S)
    assert len(images) == 3
    assert all(len(hs) == 2 for hs in images.values())
    assert sorted((hs.codomain for hs in images.values()), key=lambda H: H.sort_key) == cyclic_fours(S)
    assert conjugates_in(S, a, S) == [a]


def test_hom_set_verify_rejects_non_homomorphisms():
    G, S = build_sl23()
    a = cyclic_fours(S)[0]
    collapsed = (int(a.members[0]),) * a.order
    with pytest.raises(ClaimFailed):
        HomSet(a, a, frozenset({collapsed})).verify()
    outside = tuple(int(x) for x in cyclic_fours(S)[1].members)
    with pytest.raises(ClaimFailed):
        HomSet(a, a, frozenset({outside})).verify()


def test_automizer_orders():
    G, S = build_sl23()
    autz = aut_group(G, S)
    assert autz.aut.order == 12 and autz.inner.order == 4 and autz.out_order == 3
    assert aut_group(G, center(G)).aut.order == 1
    fam = build_agl_family(3, 2)
    assert aut_group(fam.G, fam.S).aut.order == 16
    assert aut_group(fam.H, fam.S).aut.order == 8
    assert aut_group(fam.G, fam.S).inner.is_trivial()


def test_automizer_chain():
    fam = build_agl_family(3, 2)
    for Q in enumerate_subgroups(fam.S):
        autz = aut_group(fam.G, Q, fam.S)
        from_h = autz.image(normalizer(fam.H, Q))
        assert autz.from_s <= from_h <= autz.aut.whole()
        assert autz.aut.order == normalizer(fam.G, Q).order // centralizer(fam.G, Q).order


def test_automizer_apply_is_conjugation():
    G, S = build_sl23()
    autz = aut_group(G, S)
    for phi in range(autz.aut.order):
        images = [autz.apply(phi, int(x)) for x in S.members]
        assert sorted(images) == [int(x) for x in S.members]


def test_hom_composition_stays_in_hom_set():
    G = sym(4)
    S = sylow_p(G, 2)
    auts = hom_set(G, S, S)
    pos = {int(x): k for k, x in enumerate(S.members)}
    for A in enumerate_subgroups(S):
        into = hom_set(G, A, S)
        for phi in into.maps:
            for psi in auts.maps:
                assert tuple(psi[pos[x]] for x in phi) in into


def test_fusion_equal_verdicts():
    G, S = build_sl23()
    assert fusion_equal(G, G, S, 2).equal
    diff = fusion_equal(G, S, S, 2)
    assert not diff.equal
    w = diff.witness
    assert w.subgroup.order == 4 and is_cyclic(w.subgroup)
    assert w.codomain.order == 4 and w.codomain != w.subgroup
    assert w.table not in hom_set(S, w.subgroup, S)
    fam = build_agl_family(3, 2)
    assert not fusion_equal(fam.G, fam.H, fam.S, 3).equal


def test_fusion_equal_exhaustive_matches_class_scan():
    G = sym(4)
    S = sylow_p(G, 2)
    for H in (G.whole(), S, normalizer(G, S)):
        fast = fusion_equal(G, H, S, 2)
        slow = fusion_equal(G, H, S, 2, exhaustive=True)
        assert fast.equal == slow.equal
        if not fast.equal:
            assert fast.witness.subgroup == slow.witness.subgroup
            assert fast.witness.table == slow.witness.table


def test_fusion_equal_preconditions():
    G, S = build_sl23()
    with pytest.raises(PreconditionViolated):
        fusion_equal(G, S, center(G), 2)
    other, _ = build_sl23()
    with pytest.raises(PreconditionViolated):
        fusion_equal(G, other.whole(), S, 2)


def test_frobenius_on_small_groups():
    G, S = build_sl23()
    for group, p in ((sym(3), 2), (sym(3), 3), (sym(4), 2), (sym(4), 3), (G, 2), (G, 3)):
        P = sylow_p(group, p)
        assert fusion_equal(group, P, P, p).equal == is_p_nilpotent(group, p)


def test_local_predicates_in_sl23():
    G, S = build_sl23()
    i = cyclic_fours(S)[0]
    Z = center(G)
    assert is_fully_normalized(G, S, S) and is_centric(G, S, S)
    assert is_centric(G, S, i) and not is_radical(G, S, i)
    assert not is_centric(G, S, Z)
    assert not is_essential(G, S, S) and not is_essential(G, S, i)
    assert is_radical(G, S, S)
    assert essential_classes(G, S, 2) == []


def test_klein_four_is_essential_in_s4():
    G = sym(4)
    S = sylow_p(G, 2)
    V = op_core(G, 2)
    assert V.order == 4
    assert is_essential(G, S, V)
    ess = essential_classes(G, S, 2)
    assert ess == [V]
    for Q in enumerate_subgroups(S):
        if is_essential(G, S, Q):
            assert is_centric(G, S, Q) and is_radical(G, S, Q)


def test_fully_normalized_automizers_have_sylow_from_s():
    G = sym(4)
    S = sylow_p(G, 2)
    for Q in enumerate_subgroups(S):
        if is_fully_normalized(G, S, Q):
            autz = aut_group(G, Q, S)
            assert autz.from_s.order == p_part(autz.aut.order, 2)


def test_strongly_p_embedded_detection():
    S3 = sym(3)
    assert sylow_graph_components(S3, 2) == 3
    assert has_strongly_p_embedded(S3, 2)
    assert not has_strongly_p_embedded(S3, 3)
    A4 = op_residual(sym(4), 2)
    assert A4.order == 12
    assert sylow_graph_components(A4, 2) == 1 and not has_strongly_p_embedded(A4, 2)
    assert sylow_graph_components(enumerate_group(*elementary_abelian(3, 1)), 3) == 1


def test_subgroup_classes():
    G = sym(4)
    S = sylow_p(G, 2)
    under_s = subgroup_classes(S, S)
    under_g = subgroup_classes(G, S)
    assert len(under_s) == len(enumerate_subgroups(S)) - 2
    assert len(under_g) < len(under_s)


def test_normalizer_system_group():
    G = sym(4)
    T, S = normalizer_system_group(G, sylow_p(G, 2))
    assert T.order == 8 and S.order == 8
    S3 = sym(3)
    T, P = normalizer_system_group(S3, sylow_p(S3, 3))
    assert T.order == 6 and P.order == 3
    with pytest.raises(PreconditionViolated):
        normalizer_system_group(G, op_core(G, 2))
