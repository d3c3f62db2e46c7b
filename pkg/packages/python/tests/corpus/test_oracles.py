"""Fast paths checked against brute-force scans over the bundled corpus."""

import numpy as np
import pytest

from fusionkit.corpus import load_manifest
from fusionkit.fusion import essential_classes, hom_set, is_centric, is_radical
from fusionkit.group import are_conjugate, conjugate_subgroup, subgroup_generated
from fusionkit.pstructure import (
    enumerate_subgroups,
    focal_subgroup,
    has_normal_p_complement,
    hyperfocal_fusion,
    hyperfocal_puig,
    is_p_nilpotent,
    p_part,
    sylow_conjugates,
    sylow_p,
)

P_GROUPS = ["D8", "Q8", "Q16", "D16", "SD16", "C2^3", "C3^2", "D8xC2"]
SMALL = ["S3", "S4", "A4", "D8", "C3xS3", "A4xC2", "Q8", "SL(2,3)", "GL(2,3)", "S3xS3", "C7:C3"]


@pytest.fixture(scope="module")
def corpus():
    return {e.name: e for e in load_manifest()}


def _all_subgroups(G):
    found = {G.trivial().mask: G.trivial()}
    frontier = [G.trivial()]
    while frontier:
        nxt = []
        for K in frontier:
            for x in range(G.order):
                if x in K:
                    continue
                L = subgroup_generated(G, K.members.tolist() + [x])
                if L.mask not in found:
                    found[L.mask] = L
                    nxt.append(L)
        frontier = nxt
    return found


@pytest.mark.parametrize("name", P_GROUPS)
def test_subgroup_enumeration_matches_closure_scan(corpus, name):
    G = corpus[name].group
    fast = enumerate_subgroups(G)
    assert {H.mask for H in fast} == set(_all_subgroups(G))
    assert [H.sort_key for H in fast] == sorted(H.sort_key for H in fast)


def _scan_homs(G, A, B):
    maps = set()
    for g in range(G.order):
        images = G.conj_many(A.members, g)
        if np.all(B.flags[images]):
            maps.add(tuple(int(x) for x in images))
    return maps


@pytest.mark.parametrize("name", SMALL)
def test_hom_sets_match_element_scan(corpus, name):
    entry = corpus[name]
    G = entry.group
    for p in entry.primes:
        S = sylow_p(G, p)
        subs = enumerate_subgroups(S)[:8]
        for A in subs:
            for B in subs:
                if A.order <= B.order:
                    assert hom_set(G, A, B).maps == _scan_homs(G, A, B)


@pytest.mark.parametrize("name", SMALL)
def test_focal_subgroup_matches_generator_scan(corpus, name):
    entry = corpus[name]
    G = entry.group
    for p in entry.primes:
        S = sylow_p(G, p)
        gens = []
        for x in S.members.tolist():
            ys = G.conj_many(x, np.arange(G.order))
            ys = ys[S.flags[ys]]
            gens.extend(G.mul_many(np.full(len(ys), G.inverse[x]), ys).tolist())
        assert focal_subgroup(G, S, p) == subgroup_generated(G, gens)


def test_sylow_counts(corpus):
    for entry in corpus.values():
        G = entry.group
        for p in entry.primes:
            S = sylow_p(G, p)
            assert S.order == p_part(G.order, p)
            n = len(sylow_conjugates(G, S))
            assert n % p == 1 % p and G.order % n == 0


def test_puig_and_fusion_hyperfocal_agree(corpus):
    for entry in corpus.values():
        G = entry.group
        for p in entry.primes:
            S = sylow_p(G, p)
            assert hyperfocal_fusion(G, S, p) == hyperfocal_puig(G, S, p), (entry.name, p)


def test_p_nilpotency_matches_complement_scan(corpus):
    for entry in corpus.values():
        for p in entry.primes:
            assert is_p_nilpotent(entry.group, p) == has_normal_p_complement(entry.group, p), (entry.name, p)


@pytest.mark.parametrize("name", SMALL)
def test_subgroup_conjugacy_is_an_equivalence(corpus, name):
    entry = corpus[name]
    G = entry.group
    for p in entry.primes:
        subs = enumerate_subgroups(sylow_p(G, p))
        related = np.zeros((len(subs), len(subs)), dtype=bool)
        for i, H in enumerate(subs):
            for j, K in enumerate(subs):
                ok, g = are_conjugate(G, H, K)
                related[i, j] = ok
                if ok:
                    assert conjugate_subgroup(H, g) == K
                else:
                    assert g is None
        assert related.diagonal().all()
        assert np.array_equal(related, related.T)
        reach = related.astype(np.int64) @ related.astype(np.int64) > 0
        assert np.array_equal(reach, related), (name, p)


def test_essential_subgroups_are_centric_and_radical(corpus):
    seen = 0
    for entry in corpus.values():
        G = entry.group
        for p in entry.primes:
            S = sylow_p(G, p)
            for Q in essential_classes(G, S, p):
                assert Q != S and Q <= S, (entry.name, p)
                assert is_centric(G, S, Q, p), (entry.name, p, Q.order)
                assert is_radical(G, S, Q, p), (entry.name, p, Q.order)
                seen += 1
    assert seen > 0
