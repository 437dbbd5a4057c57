"""Acceptance suite: one summary line per criterion.

Run with `pytest tests/test_acceptance.py -s` to see the PASS/FAIL lines.
"""

import random
import sys

import pytest

from clustercc import ccmod, cluster, modrep, rootsys
from clustercc.cartan import null_root, reflect_orientation
from clustercc.ccmod import (DecompositionConfig, GenericBasis,
                             build_real_schur_data, build_tube_data,
                             cc_function, g_from_rank, generic_reflect_identity,
                             rank_from_g)
from clustercc.cli import verification_sweep
from clustercc.cluster import (bfs_explore_records, dwz_recurrence_check,
                               initial_seed, mutate_along, mutate_matrix,
                               mutate_seed, principal_data, principal_matrix,
                               principal_of_block, separation, variable_data)
from clustercc.fixtures import a1tilde, a2tilde, b3tilde
from clustercc.laurent import LaurentPoly


def report(ok: bool, name: str, detail: str):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    print(line, file=sys.stderr, flush=True)
    assert ok, line


_BASIS = {}


def b3_basis() -> GenericBasis:
    """Shared generic-basis engine on the B3-affine fixture."""
    if "basis" not in _BASIS:
        t = b3tilde()
        rng = random.Random(0)
        oracle = modrep.CompatibilityOracle(t, rng)
        f_eta = modrep.generic_f_poly(t, null_root(t), rng)
        _BASIS["basis"] = GenericBasis(t, oracle, f_eta,
                                       DecompositionConfig(max_total=30))
    return _BASIS["basis"]


def test_01_cc_functions_match_cluster_variables():
    """Every depth-<=3 real Schur root plus all tube roots, three fixtures:
    the module-side CC function equals the mutation-side cluster variable."""
    total = equal = 0
    for t in (b3tilde(), a1tilde(), a2tilde()):
        rep = verification_sweep(t, 3)
        total += rep["total"]
        equal += rep["equal"]
        if not rep["all_equal"]:
            break
    report(equal == total and total >= 60,
           "CC == cluster variable sweep",
           f"{equal}/{total} roots across 3 affine fixtures")


def test_02_reference_values_b3():
    """Tube family, null root, its g-vector and its generic F-polynomial."""
    t = b3tilde()
    tubes = rootsys.build_tubes(t)
    ok = [tube.period for tube in tubes.tubes] == [3]
    level2 = {v for (lv, _), v in tubes.tubes[0].roots if lv == 2}
    ok &= level2 == {(0, 1, 1, 0), (2, 1, 2, 2), (2, 2, 1, 2)}
    eta = null_root(t)
    ok &= eta == (1, 1, 1, 1)
    ok &= g_from_rank(t, eta) == (-1, 0, 0, 1)
    F = modrep.generic_f_poly(t, eta, random.Random(0))
    y = [LaurentPoly.var(4, i) for i in range(4)]
    expect = (LaurentPoly.one(4) + y[0] + y[0] * y[1]
              + y[0] * y[1] * y[2] + y[0] * y[1] * y[2] * y[3])
    ok &= F == expect
    report(bool(ok), "reference values on the B3-affine fixture",
           "tube family, null root, g-vector, generic F over the null root")


def test_03_finite_field_oracle_equals_recurrence():
    """Submodule point counts interpolated over five fields reproduce the
    recurrence-built F-polynomial for >= 20 small rigid data."""
    rng = random.Random(1)
    checked = equal = 0
    for t in (b3tilde(), a1tilde(), a2tilde()):
        for rank, d in sorted(build_real_schur_data(t, 3).items()):
            dim = sum(a * b for a, b in zip(rank, t.D))
            if dim > 10:
                continue
            if max(modrep.grassmannian_degree_bound(t, rank, e)
                   for e in modrep._sub_ranks(rank)) > 3:
                continue
            checked += 1
            equal += modrep.rigid_f_poly(t, rank, rng) == d.F
    report(checked >= 20 and equal == checked,
           "finite-field oracle equivalence",
           f"{equal}/{checked} rigid data, total dimension <= 10, "
           "5-field interpolation with consistency point")


def test_04_recurrence_identities():
    """Mutation recurrence across every initial edge; reflection identities
    inside all builders; g-vector/F transport for >= 10 decorated vectors."""
    # (a) one-step mutation recurrence for all depth-<=3 variables
    ok_a = tot_a = 0
    for t in (b3tilde(), a1tilde(), a2tilde()):
        M0 = principal_matrix(t)
        for d, (data0, path, i) in bfs_explore_records(t, 3).items():
            for k in range(t.n):
                M1 = principal_of_block(mutate_matrix(M0, k).top_block())
                s1 = mutate_along(initial_seed(M1), (k,) + tuple(path))
                data1 = principal_data(s1, i)
                tot_a += 1
                ok_a += dwz_recurrence_check(data0, data1, M0, k)["ok"]
    # (b) builder reflections assert their g/h/F identities internally;
    # rebuilding the full depth-3 data exercises every one of them
    for t in (b3tilde(), a1tilde(), a2tilde()):
        build_real_schur_data(t, 3)
        if t.n >= 3:
            build_tube_data(t)
    # (c) transported generic F-polynomials across one source reflection
    # agree with an independent finite-field oracle at the new orientation
    basis = b3_basis()
    t = basis.t
    k = t.n - 1
    t1 = reflect_orientation(t, k)
    rng = random.Random(9)
    ok_c = tot_c = 0
    for g0 in [(0, 0, 0, 1), (0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 0),
               (0, 0, 0, -1), (0, 0, -1, 0), (0, -1, 0, 0), (-1, 0, 0, 0),
               (0, 0, -1, 1), (0, -1, 0, 1), (-1, 0, 0, 1), (0, -1, 1, 0)]:
        walk = basis._principal_walk(g0)
        v0, F0, _ = walk[0]
        v1, F1, _ = walk[1]
        dim = sum(a * b for a, b in zip(v1.plus, t.D))
        if dim <= 8 and max(modrep.grassmannian_degree_bound(t1, v1.plus, e)
                            for e in modrep._sub_ranks(v1.plus)) <= 3:
            oracle_F = modrep.generic_f_poly(t1, v1.plus, rng)
            tot_c += 1
            ok_c += (oracle_F == F1
                     and generic_reflect_identity(F1, v1.v[k], F0, t1, k))
    report(ok_a == tot_a and tot_a >= 60 and ok_c == tot_c and tot_c >= 10,
           "recurrence identities",
           f"mutation recurrence {ok_a}/{tot_a}; builder reflections "
           f"asserted; decorated transport vs oracle {ok_c}/{tot_c}")


def test_05_laurent_and_pointedness_bulk():
    """Laurent expansion, constant term 1 and non-positive tropical
    denominators over >= 10^4 assertion events."""
    before = dict(cluster.assertion_counts)
    rng = random.Random(4)
    for t in (b3tilde(), a2tilde(), a1tilde()):
        M = principal_matrix(t)
        for _ in range(300):
            s = initial_seed(M)
            for _ in range(rng.randrange(4, 10)):
                s = mutate_seed(s, rng.randrange(t.n))
            for i in range(t.n):
                pd = principal_data(s, i)
                assert pd.F.constant_term() == 1
                assert all(x >= 0 for e in pd.F.terms for x in e)
                assert all(x <= 0 for x in pd.h)
                assert separation(pd.F, pd.g, M) == s.vars[i]
    done = {key: cluster.assertion_counts[key] - before[key]
            for key in before}
    total = sum(done.values())
    report(total >= 10 ** 4, "Laurent/pointedness bulk suite",
           f"{total} assertions this run ({done})")


def test_06_generic_basis_box():
    """compatibly pointed walks for every extended g-vector in the box
    [-2,2]^8; cluster monomials from BFS depth <= 3 are generic elements."""
    basis = b3_basis()
    t = basis.t
    n = t.n
    M = principal_matrix(t)
    span = range(-2, 3)
    count = 0
    for a in span:
        for b in span:
            for c in span:
                for d in span:
                    g0 = (a, b, c, d)
                    basis._principal_walk(g0)
                    for p in span:
                        for q in span:
                            for r in span:
                                for s in span:
                                    basis.compatibly_pointed_check(
                                        g0 + (p, q, r, s), M)
                                    count += 1
    # cluster monomials: products of two variables in a common seed
    seen = {initial_seed(M).canonical_key()}
    frontier = [initial_seed(M)]
    seeds = list(frontier)
    for _ in range(3):
        nxt = []
        for s in frontier:
            for k in range(n):
                s2 = mutate_seed(s, k)
                key = s2.canonical_key()
                if key not in seen:
                    seen.add(key)
                    nxt.append(s2)
                    seeds.append(s2)
        frontier = nxt
    mono = mono_ok = 0
    for s in seeds:
        data = [variable_data(v, M) for v in s.vars]
        for i in range(n):
            for j in range(i, n):
                g = tuple(x + y for x, y in zip(data[i].g, data[j].g))
                if any(abs(x) > 2 for x in g):
                    continue
                mono += 1
                X = basis.generic_cc(g + (0,) * n, M)
                mono_ok += X == s.vars[i] * s.vars[j]
    report(count == 5 ** 8 and mono >= 100 and mono_ok == mono,
           "generic basis box evidence",
           f"{count} pointed walks; cluster monomials {mono_ok}/{mono} "
           "realized as generic elements")


def test_07_root_system_invariants():
    """Randomized invariants: reflection-invariant bilinear form, tube mesh
    and periodicity, finite-orbit period bound."""
    rng = random.Random(6)
    trials = 0
    for t in (b3tilde(), a1tilde(), a2tilde()):
        eta = null_root(t)
        for _ in range(300):
            v = tuple(rng.randrange(-4, 5) for _ in range(t.n))
            w = tuple(rng.randrange(-4, 5) for _ in range(t.n))
            i = rng.randrange(t.n)
            sv = rootsys.simple_reflection(t, i, v)
            sw = rootsys.simple_reflection(t, i, w)
            assert rootsys.bilinear(t, sv, sw) == rootsys.bilinear(t, v, w)
            assert rootsys.simple_reflection(t, i, sv) == v
            cv = rootsys.coxeter(t, v)
            assert rootsys.bilinear(t, cv, cv) == rootsys.bilinear(t, v, v)
            assert rootsys.coxeter(t, eta) == eta
            trials += 1
        if t.n >= 3:
            for tube in rootsys.build_tubes(t).tubes:
                for (level, slot), v in tube.roots:
                    assert rootsys.coxeter(t, v, tube.period) == v
                    kind = rootsys.orbit_kind(t, v)
                    assert kind is not None and kind <= t.n
                    if level >= 2:
                        window = [tube.root(1, slot + s) for s in range(level)]
                        assert v == tuple(sum(x) for x in zip(*window))
                    trials += 1
    report(trials >= 900, "root-system invariants",
           f"{trials} randomized checks across 3 fixtures")
