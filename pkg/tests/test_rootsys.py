"""Root-system invariants: reflections, Coxeter orbits, tube structure."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from clustercc import rootsys
from clustercc.cartan import null_root
from clustercc.errors import BadExtendedVertex
from clustercc.fixtures import FIXTURES, a2tilde, b3tilde

TRIPLES = [make() for make in FIXTURES.values()]

vecs = st.lists(st.integers(-4, 4), min_size=2, max_size=4)


def _vec(t, data):
    return tuple((data * t.n)[: t.n])


@given(st.sampled_from(TRIPLES), vecs, st.integers(0, 3))
def test_simple_reflection_involution(t, data, i):
    i %= t.n
    v = _vec(t, data)
    w = rootsys.simple_reflection(t, i, v)
    assert rootsys.simple_reflection(t, i, w) == v


@given(st.sampled_from(TRIPLES), vecs, vecs, st.integers(0, 3))
def test_bilinear_form_reflection_invariant(t, da, db, i):
    i %= t.n
    a, b = _vec(t, da), _vec(t, db)
    sa = rootsys.simple_reflection(t, i, a)
    sb = rootsys.simple_reflection(t, i, b)
    assert rootsys.bilinear(t, sa, sb) == rootsys.bilinear(t, a, b)
    assert rootsys.bilinear(t, a, b) == rootsys.bilinear(t, b, a)


@given(st.sampled_from(TRIPLES), vecs)
def test_coxeter_invariance_of_bilinear_form(t, data):
    v = _vec(t, data)
    cv = rootsys.coxeter(t, v)
    assert rootsys.bilinear(t, cv, cv) == rootsys.bilinear(t, v, v)
    assert rootsys.coxeter(t, cv, -1) == v


@given(st.sampled_from(TRIPLES), vecs)
def test_null_root_direction_is_coxeter_fixed(t, data):
    eta = null_root(t)
    assert rootsys.coxeter(t, eta) == eta
    v = _vec(t, data)
    shifted = tuple(x + e for x, e in zip(v, eta))
    assert rootsys.coxeter(t, shifted) == tuple(
        x + e for x, e in zip(rootsys.coxeter(t, v), eta))


def test_finite_orbit_period_bound():
    # finite c-orbits of real Schur roots have period <= n
    for t in TRIPLES:
        if t.n < 3:
            continue
        tubes = rootsys.build_tubes(t)
        for _, v in tubes.all_roots():
            kind = rootsys.orbit_kind(t, v)
            assert kind is not None and 1 <= kind <= t.n


def test_infinite_orbits_stay_infinite():
    for t in TRIPLES:
        for ell in range(t.n):
            beta = rootsys.infinite_orbit_seed(t, ell, "beta")
            assert rootsys.orbit_kind(t, beta) is None


def test_tube_periodicity_and_mesh():
    t = b3tilde()
    tubes = rootsys.build_tubes(t)
    assert [tube.period for tube in tubes.tubes] == [3]
    tube = tubes.tubes[0]
    eta = null_root(t)
    for (level, slot), v in tube.roots:
        assert all(x >= 0 for x in v)
        # c-orbit returns after `period` steps
        assert rootsys.coxeter(t, v, tube.period) == v
        if level >= 2:
            # mesh relation: a level-l root is a window sum of level-1 roots
            window = [tube.root(1, slot + s) for s in range(level)]
            assert v == tuple(sum(x) for x in zip(*window))
    # a full window of `period` level-1 roots sums to a multiple of eta
    full = [tube.root(1, s) for s in range(tube.period)]
    total = tuple(sum(x) for x in zip(*full))
    assert total == tuple(total[0] * e for e in eta) and total[0] >= 1


def test_tube_levels_b3():
    t = b3tilde()
    tube = rootsys.build_tubes(t).tubes[0]
    level1 = {v for (lv, _), v in tube.roots if lv == 1}
    level2 = {v for (lv, _), v in tube.roots if lv == 2}
    assert level1 == {(0, 1, 0, 0), (0, 0, 1, 0), (2, 1, 1, 2)}
    assert level2 == {(0, 1, 1, 0), (2, 1, 2, 2), (2, 2, 1, 2)}


def test_tube_family_a2():
    t = a2tilde()
    tubes = rootsys.build_tubes(t)
    assert sorted(tube.period for tube in tubes.tubes) == [2]


def test_admissible_extended_vertices():
    t = b3tilde()
    ok = rootsys.admissible_extended_vertices(t)
    assert ok
    bad = [k for k in range(t.n) if k not in ok]
    for k in bad:
        with pytest.raises(BadExtendedVertex):
            rootsys.build_tubes(t, extended_vertex=k)


def test_enumerate_real_schur_counts_and_positivity():
    for t in TRIPLES:
        tubes = rootsys.build_tubes(t) if t.n >= 3 else None
        roots = rootsys.enumerate_real_schur(t, 3, tubes)
        seen = set()
        eta = null_root(t)
        for v, lab in roots:
            assert all(x >= 0 for x in v) and any(x > 0 for x in v)
            assert v != eta
            assert v not in seen
            seen.add(v)
        assert len(roots) >= 2 * t.n
