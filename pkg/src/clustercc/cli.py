"""Command-line front end: JSON I/O and verification sweeps.

All vertex indices, orientation pairs and vectors are 1-indexed in input
and output and refer to the ordering of the input Cartan matrix;
internally vertices are relabeled sinks-first (the `relabeling` field of
`classify` shows the correspondence).  Machine-readable JSON goes to
stdout, a human summary to stderr.  Exit codes: 0 pass, 1 verification
mismatch, 2 input error, 3 internal invariant breach.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from typing import Optional

from . import ccmod, modrep, rootsys
from .cartan import CartanTriple, null_root, validate
from .cluster import (assertion_counts, bfs_explore_records, initial_seed,
                      mutate_along, principal_matrix, variable_data)
from .errors import (ClusterCCError, InvariantBreach, NegativeRank,
                     NotAffine)
from .fixtures import FIXTURES
from .laurent import LaurentPoly

EXIT_PASS = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_BREACH = 3

DEFAULT_QLIST = (2, 3, 4, 5, 7)


def load_triple(args) -> CartanTriple:
    if args.input:
        with open(args.input) as fh:
            obj = json.load(fh)
        omega = {(i - 1, j - 1) for i, j in obj["orientation"]}
        return validate(obj["cartan"], obj["symmetrizer"], omega)
    return FIXTURES[args.fixture]()


def to_internal(t: CartanTriple, vec):
    """Reorder an input-indexed vector to the internal vertex labels."""
    inv = {old: new for new, old in enumerate(t.perm)}
    out = [0] * t.n
    for old, x in enumerate(vec):
        out[inv[old]] = int(x)
    return tuple(out)


def to_external(t: CartanTriple, vec):
    out = [0] * len(vec)
    for new, x in enumerate(vec):
        if new < t.n:
            out[t.perm[new]] = int(x)
        else:
            out[new] = int(x)
    return out


def label_json(t: CartanTriple, lab) -> dict:
    if isinstance(lab, rootsys.Preprojective):
        return {"type": "preprojective", "index": t.perm[lab.ell] + 1,
                "power": lab.r}
    if isinstance(lab, rootsys.Preinjective):
        return {"type": "preinjective", "index": t.perm[lab.ell] + 1,
                "power": lab.r}
    if isinstance(lab, rootsys.TubeRoot):
        return {"type": "tube", "tube": lab.tube, "level": lab.level,
                "slot": lab.slot}
    raise ValueError(f"unknown label {lab!r}")


def parse_label(t: CartanTriple, text: str):
    kind, _, rest = text.partition(":")
    parts = [int(x) for x in rest.split(",")] if rest else []
    inv = {old: new for new, old in enumerate(t.perm)}
    if kind in ("preprojective", "preinjective"):
        ell, r = parts
        cls = (rootsys.Preprojective if kind == "preprojective"
               else rootsys.Preinjective)
        return cls(inv[ell - 1], r)
    if kind == "tube":
        return rootsys.TubeRoot(*parts)
    raise ValueError(f"bad label {text!r}; use preprojective:i,r "
                     "preinjective:i,r or tube:t,level,slot")


# --- verification sweep -----------------------------------------------------

def locate_variable(t: CartanTriple, M0, rank, recs):
    """Mutation path and index of the cluster variable with d-vector `rank`.

    Infinite-orbit roots sit at repeated sink/source words; tube roots are
    found by BFS, translated back by sink sweeps when needed.
    """
    n = t.n
    candidates = [tuple(range(n)) * (r + 1) for r in range(8)]
    candidates += [tuple(reversed(range(n))) * (r + 1) for r in range(8)]
    if rank in recs:
        candidates.insert(0, recs[rank][1])
    else:
        for s in range(1, n + 2):
            back = rootsys.coxeter(t, rank, -s)
            if back in recs:
                candidates.insert(0, tuple(range(n)) * s + recs[back][1])
                break
    for path in candidates:
        seed = mutate_along(initial_seed(M0), path)
        for j in range(n):
            if variable_data(seed.vars[j], M0).d == rank:
                return seed.vars[j], path, j
    raise ClusterCCError(f"no cluster variable with d-vector {rank} located")


def verification_sweep(t: CartanTriple, depth: int,
                       progress=None) -> dict:
    """Check CC functions against cluster variables for every labeled root."""
    M0 = principal_matrix(t)
    recs = bfs_explore_records(t, 3)
    tubes = rootsys.build_tubes(t) if t.n >= 3 else rootsys.TubeFamily(())
    roots = rootsys.enumerate_real_schur(t, depth, tubes)
    tube_data = {d.label: d for d in (ccmod.build_tube_data(t, tubes)
                                      if t.n >= 3 else [])}
    records = []
    all_equal = True
    for rank, lab in roots:
        t0 = time.time()
        datum = (tube_data[lab] if isinstance(lab, rootsys.TubeRoot)
                 else ccmod.build_labeled(t, lab))
        X_mod = ccmod.cc_function(datum, M0)
        var, path, idx = locate_variable(t, M0, rank, recs)
        pdata = variable_data(var, M0)
        equal = (X_mod == var and datum.g == pdata.g and datum.rank == pdata.d)
        all_equal = all_equal and equal
        records.append({
            "label": label_json(t, lab),
            "rank": to_external(t, rank),
            "g_module": to_external(t, datum.g),
            "g_cluster": to_external(t, pdata.g),
            "path": [t.perm[k] + 1 for k in path],
            "equal": equal,
            "seconds": round(time.time() - t0, 3),
        })
        if progress:
            progress(records[-1])
    return {
        "triple": t.describe(),
        "depth": depth,
        "records": records,
        "total": len(records),
        "equal": sum(1 for r in records if r["equal"]),
        "all_equal": all_equal,
    }


# --- subcommands ------------------------------------------------------------

def cmd_classify(t, args, rng):
    out = t.describe()
    if t.kind == "Affine":
        out["null_root"] = to_external(t, null_root(t))
    return EXIT_PASS, out


def cmd_roots(t, args, rng):
    if t.kind != "Affine":
        raise NotAffine("root enumeration requires an affine triple")
    tubes = rootsys.build_tubes(t) if t.n >= 3 else rootsys.TubeFamily(())
    roots = rootsys.enumerate_real_schur(t, args.depth, tubes)
    return EXIT_PASS, {
        "depth": args.depth,
        "count": len(roots),
        "null_root": to_external(t, null_root(t)),
        "tubes": [{"period": tb.period,
                   "roots": [{"level": lv, "slot": s,
                              "rank": to_external(t, v)}
                             for (lv, s), v in tb.roots]}
                  for tb in tubes.tubes],
        "roots": [{"label": label_json(t, lab), "rank": to_external(t, v)}
                  for v, lab in roots],
    }


def cmd_ccvar(t, args, rng):
    M0 = principal_matrix(t)
    if args.label:
        lab = parse_label(t, args.label)
        datum = ccmod.build_labeled(t, lab)
        X = ccmod.cc_function(datum, M0)
        return EXIT_PASS, {
            "label": label_json(t, lab),
            "rank": to_external(t, datum.rank),
            "g": to_external(t, datum.g),
            "f_polynomial": datum.F.to_json(),
            "cc_function": X.to_json(),
        }
    inv = {old: new for new, old in enumerate(t.perm)}
    path = tuple(inv[int(x) - 1] for x in args.path.split(","))
    seed = mutate_along(initial_seed(M0), path)
    out = {"path": [int(x) for x in args.path.split(",")], "variables": []}
    for i in range(t.n):
        pd = variable_data(seed.vars[i], M0)
        out["variables"].append({
            "index": t.perm[i] + 1,
            "g": to_external(t, pd.g),
            "d": to_external(t, pd.d),
            "f_polynomial": pd.F.to_json(),
            "laurent": seed.vars[i].to_json(),
        })
    return EXIT_PASS, out


def cmd_verify(t, args, rng):
    if t.kind != "Affine":
        raise NotAffine("verification sweep requires an affine triple")
    def progress(rec):
        status = "ok" if rec["equal"] else "MISMATCH"
        print(f"  {rec['rank']} {status} ({rec['seconds']}s)",
              file=sys.stderr)
    report = verification_sweep(t, args.depth, progress)
    report["laurent_assertions"] = dict(assertion_counts)
    code = EXIT_PASS if report["all_equal"] else EXIT_MISMATCH
    return code, report


def _make_basis(t, args, rng):
    oracle = modrep.CompatibilityOracle(t, rng)
    eta = null_root(t)
    f_eta = modrep.generic_f_poly(t, eta, rng, qlist=tuple(args.qlist))
    cfg = ccmod.DecompositionConfig(max_total=args.bound)
    return ccmod.GenericBasis(t, oracle, f_eta, cfg)


def cmd_generic(t, args, rng):
    if t.kind != "Affine":
        raise NotAffine("generic elements require an affine triple")
    M0 = principal_matrix(t)
    gvec = [int(x) for x in args.gvec.split(",")]
    if len(gvec) == t.n:
        gvec = gvec + [0] * t.n
    if len(gvec) != 2 * t.n:
        raise ClusterCCError(f"g-vector must have {t.n} or {2 * t.n} entries")
    g_ext = to_internal(t, gvec[: t.n]) + tuple(gvec[t.n:])
    basis = _make_basis(t, args, rng)
    X = basis.generic_cc(g_ext, M0)
    v = ccmod.rank_from_g(t, g_ext[: t.n])
    m, labels = basis.decomposition(v.plus)
    report = basis.compatibly_pointed_check(g_ext, M0)
    return EXIT_PASS, {
        "g_vector": gvec,
        "decorated_rank": to_external(t, v.v),
        "decomposition": {"m": m,
                          "parts": [label_json(t, l) for l in labels]},
        "f_polynomial": basis.generic_f(v.plus).to_json(),
        "element": X.to_json(),
        "pointed_walk_assertions": report.assertions,
    }


def cmd_decompose(t, args, rng):
    if t.kind != "Affine":
        raise NotAffine("canonical decomposition requires an affine triple")
    r = to_internal(t, [int(x) for x in args.rank.split(",")])
    oracle = modrep.CompatibilityOracle(t, rng)
    cfg = ccmod.DecompositionConfig(max_total=args.bound)
    m, labels = ccmod.canonical_decomposition(t, r, oracle, cfg)
    return EXIT_PASS, {
        "rank": to_external(t, r),
        "m": m,
        "parts": [label_json(t, l) for l in labels],
    }


def cmd_oracle(t, args, rng):
    if args.module:
        with open(args.module) as fh:
            obj = json.load(fh)
        M = modrep.module_from_json(t, obj)
        # module files use the relabeled vertex order shown by `classify`
        out = {
            "q": M.q,
            "rank": list(M.rank),
            "end_dim": modrep.end_dim(M),
            "ext1_dim": modrep.ext1_dim(M, M),
            "rigid": modrep.is_rigid(M),
        }
        if args.grassmannian:
            out["submodule_counts"] = [
                {"e": list(e),
                 "count": modrep.enumerate_submodules(M, e, min(args.bound, 12))}
                for e in modrep._sub_ranks(M.rank)]
        return EXIT_PASS, out
    rank = to_internal(t, [int(x) for x in args.rank.split(",")])
    F = modrep.rigid_f_poly(t, rank, rng, qlist=tuple(args.qlist),
                            max_total_dim=min(args.bound, 12))
    return EXIT_PASS, {"rank": to_external(t, rank),
                       "f_polynomial": F.to_json()}


def cmd_explore(t, args, rng):
    recs = bfs_explore_records(t, args.depth)
    out = {"depth": args.depth, "variables": len(recs), "records": []}
    for dvec, (pd, path, i) in sorted(recs.items()):
        out["records"].append({
            "d": to_external(t, dvec),
            "g": to_external(t, pd.g),
            "path": [t.perm[k] + 1 for k in path],
            "index": t.perm[i] + 1,
        })
    return EXIT_PASS, out


COMMANDS = {
    "classify": cmd_classify,
    "roots": cmd_roots,
    "ccvar": cmd_ccvar,
    "verify": cmd_verify,
    "generic": cmd_generic,
    "decompose": cmd_decompose,
    "oracle": cmd_oracle,
    "explore": cmd_explore,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="clustercc",
        description="Affine cluster algebras: mutation, CC functions, "
                    "generic bases, finite-field oracle.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--fixture", default="b3tilde", choices=sorted(FIXTURES))
        p.add_argument("--input", help="Cartan triple JSON file "
                       '({"cartan": [[...]], "symmetrizer": [...], '
                       '"orientation": [[i, j], ...]}, 1-indexed, '
                       "[i, j] meaning an edge oriented j -> i)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--json", action="store_true",
                       help="machine-readable output only")
        p.add_argument("--qlist", type=lambda s: [int(x) for x in s.split(",")],
                       default=list(DEFAULT_QLIST))
        p.add_argument("--bound", type=int, default=30,
                       help="desk-scale size bound (decomposition/counting)")

    common(sub.add_parser("classify"))
    p = sub.add_parser("roots")
    common(p)
    p.add_argument("--depth", type=int, default=3)
    p = sub.add_parser("ccvar")
    common(p)
    p.add_argument("--label", help="preprojective:i,r preinjective:i,r "
                   "or tube:t,level,slot")
    p.add_argument("--path", help="comma-separated 1-indexed mutation path")
    p = sub.add_parser("verify")
    common(p)
    p.add_argument("--depth", type=int, default=3)
    p = sub.add_parser("generic")
    common(p)
    p.add_argument("--gvec", required=True,
                   help="comma-separated extended g-vector")
    p = sub.add_parser("decompose")
    common(p)
    p.add_argument("--rank", required=True, help="comma-separated rank vector")
    p = sub.add_parser("oracle")
    common(p)
    p.add_argument("--module", help="module JSON file")
    p.add_argument("--rank", help="rank vector for a sampled rigid module")
    p.add_argument("--grassmannian", action="store_true")
    p = sub.add_parser("explore")
    common(p)
    p.add_argument("--depth", type=int, default=3)
    return ap


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    rng = random.Random(args.seed)
    print(f"seed: {args.seed}", file=sys.stderr)
    try:
        t = load_triple(args)
    except (ClusterCCError, OSError, KeyError, ValueError,
            json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        code, payload = COMMANDS[args.command](t, args, rng)
    except InvariantBreach as exc:
        print(f"invariant breach: {exc}", file=sys.stderr)
        return EXIT_BREACH
    except AssertionError as exc:
        print(f"invariant breach: {exc}", file=sys.stderr)
        return EXIT_BREACH
    except (ClusterCCError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    json.dump(payload, sys.stdout, indent=None if args.json else 2)
    print()
    if not args.json:
        print(f"{args.command}: exit {code}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
