"""CC data builders, decorated rank vectors and canonical decompositions."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from clustercc import ccmod, modrep, rootsys
from clustercc.cartan import null_root, reflect_orientation
from clustercc.ccmod import (DecompositionConfig, build_labeled,
                             build_preinjective, build_preprojective,
                             build_tube_data, canonical_decomposition,
                             cc_function, cluster_monomial_cc,
                             decorated_reflect, g_from_rank, rank_from_g,
                             reflect_ccdatum, t_map)
from clustercc.cluster import (bfs_explore_records, initial_seed,
                               mutate_along, mutate_matrix, principal_matrix,
                               variable_data)
from clustercc.errors import NegativeRank
from clustercc.fixtures import FIXTURES, a2tilde, b3tilde

TRIPLES = [make() for make in FIXTURES.values()]

small = st.lists(st.integers(-3, 3), min_size=2, max_size=4)


def _vec(t, data):
    return tuple((data * t.n)[: t.n])


@given(st.sampled_from(TRIPLES), small)
def test_g_and_rank_are_mutually_inverse(t, data):
    m = tuple(abs(x) for x in _vec(t, data))
    g = g_from_rank(t, m)
    assert rank_from_g(t, g).v == m
    # any integer g-vector decomposes as v = v+ - v- with disjoint supports
    g2 = _vec(t, data)
    v = rank_from_g(t, g2)
    assert tuple(p - q for p, q in zip(v.plus, v.minus)) == v.v
    assert all(p == 0 or q == 0 for p, q in zip(v.plus, v.minus))


def test_g_vector_examples():
    t = b3tilde()
    assert g_from_rank(t, (1, 1, 1, 1)) == (-1, 0, 0, 1)
    assert g_from_rank(t, (1, 0, 0, 0)) == (-1, 1, 0, 0)


def test_builders_agree_with_mutated_variables():
    t = b3tilde()
    M = principal_matrix(t)
    n = t.n
    for r in range(2):
        seed = mutate_along(initial_seed(M), tuple(range(n)) * (r + 1))
        for ell in range(n):
            d = build_preprojective(t, ell, r)
            assert d.g == g_from_rank(t, d.rank)
            assert d.F.constant_term() == 1
            assert cc_function(d, M) in seed.vars
        seed = mutate_along(initial_seed(M), tuple(reversed(range(n))) * (r + 1))
        for ell in range(n):
            d = build_preinjective(t, ell, r)
            assert cc_function(d, M) in seed.vars


def test_reflect_rejects_negative_rank():
    t = b3tilde()
    d = ccmod._pseudo_simple(t, 0)
    with pytest.raises(NegativeRank):
        reflect_ccdatum(d, 0)


def test_tube_data_matches_root_system():
    for t in (b3tilde(), a2tilde()):
        tubes = rootsys.build_tubes(t)
        expected = {v: lab for lab, v in tubes.all_roots()}
        data = build_tube_data(t, tubes)
        assert {d.rank for d in data} == set(expected)
        for d in data:
            assert d.label == expected[d.rank]
            assert d.g == g_from_rank(t, d.rank)
            assert d.F.constant_term() == 1


def test_tube_f_matches_finite_field_oracle():
    t = b3tilde()
    rng = random.Random(5)
    for d in build_tube_data(t):
        if sum(a * b for a, b in zip(d.rank, t.D)) <= 6:
            assert modrep.rigid_f_poly(t, d.rank, rng) == d.F


@given(st.sampled_from(TRIPLES), small, st.integers(0, 3))
@settings(deadline=None, max_examples=40)
def test_decorated_reflect_tracks_t_map(t, data, k):
    k %= t.n
    if not t.is_sink(k):
        return
    g = _vec(t, data)
    M = principal_matrix(t)
    v = rank_from_g(t, g)
    g2 = t_map(tuple(g) + (0,) * t.n, M, k)
    t2 = reflect_orientation(t, k)
    v2 = rank_from_g(t2, g2[: t.n])
    assert decorated_reflect(v, t, k).v == v2.v


@given(st.sampled_from(TRIPLES), small, st.integers(0, 3))
@settings(deadline=None, max_examples=40)
def test_t_map_involution(t, data, k):
    k %= t.n
    M = principal_matrix(t)
    g = tuple(_vec(t, data)) + (0,) * t.n
    back = t_map(t_map(g, M, k), mutate_matrix(M, k), k)
    assert back == g


def test_canonical_decomposition_examples():
    t = b3tilde()
    rng = random.Random(1)
    oracle = modrep.CompatibilityOracle(t, rng)
    cfg = DecompositionConfig()
    eta = null_root(t)
    assert canonical_decomposition(t, eta, oracle, cfg) == (1, [])
    two_eta = tuple(2 * e for e in eta)
    assert canonical_decomposition(t, two_eta, oracle, cfg) == (2, [])
    m, labs = canonical_decomposition(t, (0, 1, 0, 0), oracle, cfg)
    assert m == 0 and len(labs) == 1
    # rigid level-2 tube root stays indecomposable
    m, labs = canonical_decomposition(t, (2, 2, 1, 2), oracle, cfg)
    assert m == 0 and len(labs) == 1
    assert isinstance(labs[0], rootsys.TubeRoot)
    # sum of the two exceptional level-1 roots splits
    m, labs = canonical_decomposition(t, (0, 1, 1, 0), oracle, cfg)
    assert m == 0


def test_cluster_monomial_is_a_product_of_variables():
    t = a2tilde()
    M = principal_matrix(t)
    d0 = build_preprojective(t, 0, 0)
    d1 = build_preprojective(t, 1, 0)
    x0 = cc_function(d0, M)
    x1 = cc_function(d1, M)
    zero = [0] * t.n
    assert cluster_monomial_cc([(d0, 2), (d1, 1)], zero, M) == x0 * x0 * x1


def test_real_schur_sweep_is_consistent():
    t = a2tilde()
    data = ccmod.build_real_schur_data(t, 2)
    M = principal_matrix(t)
    for rank, d in data.items():
        assert d.rank == rank
        pd = variable_data(cc_function(d, M), M)
        assert pd.d == rank and pd.g == d.g
