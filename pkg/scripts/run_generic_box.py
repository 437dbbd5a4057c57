#!/usr/bin/env python3
"""Walk every extended g-vector in a box through the full source-reflection
sequence, checking compatible pointedness, and realize small cluster
monomials as generic elements."""

import argparse
import itertools
import random
import sys
import time

from clustercc import modrep
from clustercc.cartan import null_root
from clustercc.ccmod import DecompositionConfig, GenericBasis
from clustercc.cluster import (initial_seed, mutate_seed, principal_matrix,
                               variable_data)
from clustercc.fixtures import FIXTURES


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fixture", default="b3tilde", choices=sorted(FIXTURES))
    ap.add_argument("--radius", type=int, default=2,
                    help="box half-width for the g-vector sweep")
    ap.add_argument("--monomial-depth", type=int, default=3,
                    help="BFS depth for the cluster-monomial check")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    t = FIXTURES[args.fixture]()
    n = t.n
    rng = random.Random(args.seed)
    print(f"fixture {args.fixture}, seed {args.seed}")

    t0 = time.time()
    oracle = modrep.CompatibilityOracle(t, rng)
    f_eta = modrep.generic_f_poly(t, null_root(t), rng)
    basis = GenericBasis(t, oracle, f_eta, DecompositionConfig(max_total=30))
    print(f"generic F over the null root: {f_eta.pretty()} "
          f"({time.time() - t0:.2f}s, {oracle.queries} oracle queries)")

    M = principal_matrix(t)
    span = range(-args.radius, args.radius + 1)
    t0 = time.time()
    principals = list(itertools.product(span, repeat=n))
    for g0 in principals:
        basis._principal_walk(g0)
    print(f"{len(principals)} principal walks in {time.time() - t0:.2f}s")

    t0 = time.time()
    count = 0
    for g0 in principals:
        for tail in itertools.product(span, repeat=n):
            basis.compatibly_pointed_check(g0 + tail, M)
            count += 1
    print(f"{count} compatibly pointed walks in {time.time() - t0:.2f}s")

    t0 = time.time()
    seeds = [initial_seed(M)]
    seen = {seeds[0].canonical_key()}
    frontier = list(seeds)
    for _ in range(args.monomial_depth):
        nxt = []
        for s in frontier:
            for k in range(n):
                s2 = mutate_seed(s, k)
                if s2.canonical_key() not in seen:
                    seen.add(s2.canonical_key())
                    nxt.append(s2)
                    seeds.append(s2)
        frontier = nxt
    mono = ok = 0
    for s in seeds:
        data = [variable_data(v, M) for v in s.vars]
        for i in range(n):
            for j in range(i, n):
                g = tuple(x + y for x, y in zip(data[i].g, data[j].g))
                if any(abs(x) > args.radius for x in g):
                    continue
                mono += 1
                ok += basis.generic_cc(g + (0,) * n, M) == s.vars[i] * s.vars[j]
    print(f"cluster monomials realized as generic elements: {ok}/{mono} "
          f"({time.time() - t0:.2f}s)")
    return 0 if ok == mono else 1


if __name__ == "__main__":
    sys.exit(main())
