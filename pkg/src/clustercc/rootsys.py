"""Root-lattice arithmetic for a Cartan triple.

Roots are plain integer tuples in the basis of simple roots.  The bilinear
form is (alpha_i, alpha_j) = d_i c_ij; simple reflections act by
s_i(v) = v - (sum_j c_ij v_j) alpha_i, and the Coxeter element is
c = s_1 s_2 ... s_n (rightmost factor applied first), which requires the
sinks-first vertex numbering produced by validation.

In affine type the positive real Schur roots fall into 2n infinite c-orbits
(preprojective c^r beta_l and preinjective c^-r gamma_l) together with
finitely many finite c-orbits arranged in tubes.  A tube of period d carries
roots indexed by (level, slot) in {1..d-1} x Z/d satisfying the mesh relation
and c(beta_{level,slot}) = beta_{level,slot+1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .cartan import KIND_AFFINE, KIND_FINITE, CartanTriple, null_root, subtriple
from .errors import BadExtendedVertex, NotAffine

RootVec = tuple


def is_positive(v: RootVec) -> bool:
    return any(v) and all(x >= 0 for x in v)


def bilinear(t: CartanTriple, a: RootVec, b: RootVec) -> int:
    return sum(t.D[i] * t.C[i][j] * a[i] * b[j]
               for i in range(t.n) for j in range(t.n)
               if a[i] and b[j])


def simple_reflection(t: CartanTriple, i: int, v: RootVec) -> RootVec:
    coef = sum(t.C[i][j] * v[j] for j in range(t.n))
    out = list(v)
    out[i] -= coef
    return tuple(out)


def coxeter(t: CartanTriple, v: RootVec, power: int = 1) -> RootVec:
    assert t.normalized, "Coxeter element requires the normalized ordering"
    for _ in range(abs(power)):
        if power > 0:
            for i in reversed(range(t.n)):
                v = simple_reflection(t, i, v)
        else:
            for i in range(t.n):
                v = simple_reflection(t, i, v)
    return v


def infinite_orbit_seed(t: CartanTriple, ell: int, side: str) -> RootVec:
    """beta_ell = s_1...s_{ell-1}(alpha_ell) or gamma_ell = s_n...s_{ell+1}(alpha_ell)."""
    v = tuple(1 if i == ell else 0 for i in range(t.n))
    if side == "beta":
        for i in reversed(range(ell)):
            v = simple_reflection(t, i, v)
    elif side == "gamma":
        for i in range(ell + 1, t.n):
            v = simple_reflection(t, i, v)
    else:
        raise ValueError("side must be 'beta' or 'gamma'")
    return v


def orbit_kind(t: CartanTriple, v: RootVec) -> Optional[int]:
    """Period of the c-orbit of v if it is finite (bound n), else None.

    Tube periods are at most n-1; the bound n leaves a safety margin.
    """
    w = v
    for p in range(1, t.n + 1):
        w = coxeter(t, w, 1)
        if w == v:
            return p
    return None


# --- Schur root labels ------------------------------------------------------

@dataclass(frozen=True)
class Preprojective:
    ell: int
    r: int


@dataclass(frozen=True)
class Preinjective:
    ell: int
    r: int


@dataclass(frozen=True)
class TubeRoot:
    tube: int
    level: int
    slot: int


@dataclass(frozen=True)
class Tube:
    period: int
    roots: tuple  # tuple of ((level, slot), RootVec), levels 1..period-1

    def root(self, level: int, slot: int) -> RootVec:
        return dict(self.roots)[(level, slot % self.period)]


@dataclass(frozen=True)
class TubeFamily:
    tubes: tuple

    def all_roots(self):
        return [(TubeRoot(i, lv, s), v)
                for i, tube in enumerate(self.tubes)
                for (lv, s), v in tube.roots]


def admissible_extended_vertices(t: CartanTriple):
    """Vertices k for which the tube construction relative to k succeeds.

    Deleting k must leave a finite-type matrix whose positive system still
    contains a full set of tube-bottom chains; the only reliable test for
    the second condition is running the construction.
    """
    out = []
    for k in range(t.n):
        if subtriple(t, k).kind != KIND_FINITE:
            continue
        try:
            build_tubes(t, k)
        except BadExtendedVertex:
            continue
        out.append(k)
    return out


def _finite_positive_roots(t: CartanTriple):
    """All positive roots of a finite-type triple, by reflection closure."""
    assert t.kind == KIND_FINITE
    simples = {tuple(1 if i == j else 0 for j in range(t.n)) for i in range(t.n)}
    roots = set(simples)
    frontier = set(simples)
    while frontier:
        nxt = set()
        for v in frontier:
            for i in range(t.n):
                w = simple_reflection(t, i, v)
                if is_positive(w) and w not in roots:
                    roots.add(w)
                    nxt.add(w)
        frontier = nxt
    return roots


def build_tubes(t: CartanTriple, extended_vertex: Optional[int] = None) -> TubeFamily:
    """Assemble the tubes of finite c-orbit roots.

    The roots supported away from the chosen extended vertex form the
    positive system of a finite-type subdiagram; those with finite c-orbit
    in the full lattice give a rank n-2 subsystem of type A x ... x A whose
    simple roots are the tube bottoms.
    """
    if t.kind != KIND_AFFINE:
        raise NotAffine("tubes exist in affine type only")
    if t.n == 2:
        return TubeFamily(tubes=())
    if extended_vertex is None:
        last = None
        for k in range(t.n):
            if subtriple(t, k).kind != KIND_FINITE:
                continue
            try:
                return build_tubes(t, k)
            except BadExtendedVertex as exc:
                last = exc
        raise BadExtendedVertex("no admissible extended vertex") from last
    k = extended_vertex
    sub = subtriple(t, k)
    if sub.kind != KIND_FINITE:
        raise BadExtendedVertex(f"complement of vertex {k} is not finite type")

    def lift(v):
        out = [0] * t.n
        for i, x in zip(sub.perm, v):
            out[i] = x
        return tuple(out)

    fin_pos = {lift(v) for v in _finite_positive_roots(sub)}
    finite_orbit = {v for v in fin_pos if orbit_kind(t, v) is not None}

    # simple roots of the finite-orbit subsystem: not a sum of two members
    sums = {tuple(a + b for a, b in zip(u, v))
            for u in finite_orbit for v in finite_orbit}
    simples = sorted(v for v in finite_orbit if v not in sums)

    # chain the simples into A-type components via bilinear adjacency
    adj = {v: [w for w in simples
               if w != v and bilinear(t, v, w) < 0] for v in simples}
    assert all(len(ns) <= 2 for ns in adj.values()), \
        "ambiguous A-chain grouping: a simple root has more than two neighbors"
    chains = []
    seen = set()
    for v in simples:
        if v in seen or len(adj[v]) == 2:
            continue
        chain = [v]
        seen.add(v)
        while True:
            nxt = [w for w in adj[chain[-1]] if w not in seen]
            if not nxt:
                break
            chain.append(nxt[0])
            seen.add(nxt[0])
        chains.append(chain)
    assert len(seen) == len(simples), "A-chain grouping left a cycle"
    if sum(len(c) for c in chains) != t.n - 2:
        raise BadExtendedVertex(
            f"complement of vertex {k} misses tube-bottom chains "
            f"(found rank {sum(len(c) for c in chains)}, need {t.n - 2})")

    tubes = []
    for chain in chains:
        d = len(chain) + 1
        if d > 2:
            # orient the chain so that c advances along it
            if coxeter(t, chain[0], 1) != chain[1]:
                chain = chain[::-1]
            for m in range(len(chain) - 1):
                assert coxeter(t, chain[m], 1) == chain[m + 1], \
                    "Coxeter element does not advance along the chain"
        bottom = {}
        for m, v in enumerate(chain, start=1):
            bottom[m] = v
        bottom[0] = coxeter(t, chain[-1], 1)
        assert coxeter(t, bottom[0], 1) == chain[0], "tube bottom is not c-cyclic"

        roots = {}
        zero = (0,) * t.n
        level = {0: {m: zero for m in range(d)}, 1: bottom}
        for m in range(d):
            roots[(1, m)] = bottom[m]
        for lv in range(2, d):
            level[lv] = {}
            for m in range(d):
                a = level[lv - 1][m]
                b = level[lv - 1][(m + 1) % d]
                c0 = level[lv - 2][(m + 1) % d]
                v = tuple(x + y - z for x, y, z in zip(a, b, c0))
                level[lv][m] = v
                roots[(lv, m)] = v
        tube = Tube(period=d, roots=tuple(sorted(roots.items())))
        _check_tube(t, tube)
        tubes.append(tube)
    return TubeFamily(tubes=tuple(sorted(tubes, key=lambda tb: tb.roots)))


def _check_tube(t: CartanTriple, tube: Tube):
    d = tube.period
    rd = dict(tube.roots)
    zero = (0,) * t.n
    get = lambda lv, m: zero if lv == 0 else rd[(lv, m % d)]
    for (lv, m), v in rd.items():
        assert coxeter(t, v, 1) == get(lv, m + 1), "c does not advance tube slots"
        if lv + 1 <= d - 1:
            lhs = tuple(a + b for a, b in zip(get(lv, m), get(lv, m + 1)))
            rhs = tuple(a + b for a, b in zip(get(lv + 1, m), get(lv - 1, m + 1)))
            assert lhs == rhs, "mesh relation violated"


def enumerate_real_schur(t: CartanTriple, depth: int,
                         tubes: Optional[TubeFamily] = None):
    """All labeled real Schur roots with orbit depth <= depth, plus tube roots."""
    if t.kind != KIND_AFFINE:
        raise NotAffine("real Schur enumeration requires affine type")
    out = []
    seen = set()
    for ell in range(t.n):
        beta = infinite_orbit_seed(t, ell, "beta")
        gamma = infinite_orbit_seed(t, ell, "gamma")
        for r in range(depth + 1):
            b = coxeter(t, beta, r) if r else beta
            g = coxeter(t, gamma, -r) if r else gamma
            for v, lab in ((b, Preprojective(ell, r)), (g, Preinjective(ell, r))):
                if v not in seen:
                    seen.add(v)
                    out.append((v, lab))
    if t.n >= 3:
        if tubes is None:
            tubes = build_tubes(t)
        for lab, v in tubes.all_roots():
            if v not in seen:
                seen.add(v)
                out.append((v, lab))
    eta = null_root(t)
    for v, _ in out:
        assert is_positive(v), "real Schur roots must be positive"
        assert v != eta, "null root is not a real root"
    return out
