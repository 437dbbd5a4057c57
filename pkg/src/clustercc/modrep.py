"""Brute-force oracle over small finite fields.

Modules over the algebra H = H(C, D, Omega) are modeled explicitly: the
vertex algebras are H_i = F_q[eps]/(eps^{d_i}), and for each edge
(i, j) in Omega (arrow j -> i) the bimodule iHj decomposes into
g_ij = gcd(|c_ij|, |c_ji|) summands, each free as a left H_i-module on
{1 (x) eps_j^s : s < f_ij} with the commutation rule
eps_i^{f_ji} (x) 1 = 1 (x) eps_j^{f_ij}, where f_ij = |c_ij| / g_ij.
A locally free module of rank r is then a free H_i-module H_i^{r_i} at
each vertex plus, per edge, an H_i-matrix of shape r_i x (b_ij r_j)
describing the structure map iHj (x) M_j -> M_i on the left basis
indexed by (l, t, s) -> (l*g + t)*f_ij + s.

Hom and Ext^1 dimensions come from exact elimination on the K-linear
intertwiner system f_i o M_ij = N_ij o (id (x) f_j); its kernel is
Hom(M, N) and its cokernel is Ext^1(M, N) by the standard bimodule
resolution of a tensor algebra.  Reflection functors take kernels and
cokernels of the boundary maps at a sink/source; submodule counting over
several q plus Lagrange interpolation recovers F-polynomials.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

try:
    import numpy as _np
except ImportError:  # pragma: no cover - numpy is a hard dependency in practice
    _np = None

from .cartan import CartanTriple, reflect_orientation
from .errors import (InterpolationInconsistent, NotLocallyFreeResult,
                     NotSinkOrSource, ShapeMismatch, TooLarge)
from .laurent import LaurentPoly

# --- finite fields ----------------------------------------------------------

# irreducible polynomials for the prime-power fields, coefficients low-first
_IRRED = {4: (1, 1, 1), 8: (1, 1, 0, 1), 9: (1, 0, 1)}
_SUPPORTED_Q = (2, 3, 4, 5, 7)


class GF:
    """Arithmetic tables for F_q, q <= 9. Elements are ints 0..q-1.

    A non-prime q encodes polynomial coefficients as base-p digits.
    """

    def __init__(self, q: int):
        p = next(d for d in (2, 3, 5, 7) if q % d == 0)
        k = 1
        while p ** k < q:
            k += 1
        assert p ** k == q, f"{q} is not a prime power"
        if k > 1 and q not in _IRRED:
            raise ValueError(f"unsupported field size {q}")
        self.q = q
        self.p = p
        self.k = k

        def digits(x):
            return [(x // p ** i) % p for i in range(k)]

        def undig(ds):
            return sum(c * p ** i for i, c in enumerate(ds))

        def polymul(a, b):
            out = [0] * (2 * k - 1)
            for i, x in enumerate(a):
                for j, y in enumerate(b):
                    out[i + j] = (out[i + j] + x * y) % p
            if k > 1:
                irr = _IRRED[q]
                for i in range(len(out) - 1, k - 1, -1):
                    c = out[i]
                    if c:
                        out[i] = 0
                        for j in range(k):
                            out[i - k + j] = (out[i - k + j] - c * irr[j]) % p
            return out[:k]

        self.add = [[undig([(x + y) % p for x, y in
                            zip(digits(a), digits(b))]) for b in range(q)]
                    for a in range(q)]
        self.mul = [[undig(polymul(digits(a), digits(b))) for b in range(q)]
                    for a in range(q)]
        self.neg = [self.add[a].index(0) for a in range(q)]
        self.inv = [0] + [self.mul[a].index(1) for a in range(1, q)]
        self.sub = [[self.add[a][self.neg[b]] for b in range(q)]
                    for a in range(q)]


_GF_CACHE: Dict[int, GF] = {}


def gf(q: int) -> GF:
    if q not in _GF_CACHE:
        _GF_CACHE[q] = GF(q)
    return _GF_CACHE[q]


# --- truncated polynomial ring H_i = F_q[eps]/(eps^d) -----------------------

def h_add(F: GF, a, b):
    return tuple(F.add[x][y] for x, y in zip(a, b))


def h_sub(F: GF, a, b):
    return tuple(F.sub[x][y] for x, y in zip(a, b))


def h_scale(F: GF, c, a):
    return tuple(F.mul[c][x] for x in a)


def h_mul(F: GF, a, b):
    d = len(a)
    out = [0] * d
    for i, x in enumerate(a):
        if x:
            for j in range(d - i):
                out[i + j] = F.add[out[i + j]][F.mul[x][b[j]]]
    return tuple(out)


def h_shift(F: GF, a, s: int):
    """Multiply by eps^s (truncating)."""
    d = len(a)
    if s >= d:
        return (0,) * d
    return (0,) * s + a[: d - s]


def h_zero(d: int):
    return (0,) * d


def h_one(d: int):
    return (1,) + (0,) * (d - 1)


def h_is_unit(a) -> bool:
    return a[0] != 0


def h_inv(F: GF, a):
    """Inverse of a unit, by power-series inversion."""
    assert a[0] != 0
    d = len(a)
    out = [F.inv[a[0]]] + [0] * (d - 1)
    for i in range(1, d):
        s = 0
        for j in range(1, i + 1):
            s = F.add[s][F.mul[a[j]][out[i - j]]]
        out[i] = F.neg[F.mul[out[0]][s]]
    return tuple(out)


# --- F_q linear algebra -----------------------------------------------------

def gf_rank(F: GF, rows: List[List[int]], ncols: int) -> int:
    """Rank of a matrix over F_q; numpy fast path for prime fields."""
    if not rows or ncols == 0:
        return 0
    if _np is not None and F.k == 1:
        p = F.p
        a = _np.array(rows, dtype=_np.int64) % p
        r = 0
        for col in range(ncols):
            piv = None
            for i in range(r, a.shape[0]):
                if a[i, col]:
                    piv = i
                    break
            if piv is None:
                continue
            if piv != r:
                a[[r, piv]] = a[[piv, r]]
            a[r] = (a[r] * pow(int(a[r, col]), p - 2, p)) % p
            below = a[r + 1:, col]
            if below.any():
                a[r + 1:] = (a[r + 1:] - _np.outer(below, a[r])) % p
            r += 1
            if r == a.shape[0]:
                break
        return r
    m = [list(r) for r in rows]
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = F.inv[m[rank][col]]
        m[rank] = [F.mul[inv][x] for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                c = m[i][col]
                m[i] = [F.sub[x][F.mul[c][y]] for x, y in zip(m[i], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


class _RrefSpan:
    """Incremental F_q row space with membership testing."""

    def __init__(self, F: GF, width: int):
        self.F = F
        self.width = width
        self.rows: List[List[int]] = []
        self.pivots: List[int] = []

    def _reduce(self, v: List[int]) -> List[int]:
        F = self.F
        v = list(v)
        for row, piv in zip(self.rows, self.pivots):
            c = v[piv]
            if c:
                v = [F.sub[x][F.mul[c][y]] for x, y in zip(v, row)]
        return v

    def add(self, v) -> bool:
        """Insert v; returns True if it enlarged the span."""
        v = self._reduce(v)
        piv = next((i for i, x in enumerate(v) if x), None)
        if piv is None:
            return False
        F = self.F
        inv = F.inv[v[piv]]
        v = [F.mul[inv][x] for x in v]
        for i, row in enumerate(self.rows):
            c = row[piv]
            if c:
                self.rows[i] = [F.sub[x][F.mul[c][y]] for x, y in zip(row, v)]
        self.rows.append(v)
        self.pivots.append(piv)
        return True

    def contains(self, v) -> bool:
        return not any(self._reduce(v))


# --- modules ----------------------------------------------------------------

def edge_params(t: CartanTriple, i: int, j: int) -> Tuple[int, int, int]:
    """(g_ij, f_ij, f_ji) for the bimodule on the edge between i and j."""
    import math
    cij = abs(t.C[i][j])
    cji = abs(t.C[j][i])
    g = math.gcd(cij, cji)
    return g, cij // g, cji // g


@dataclass(frozen=True)
class FqModule:
    q: int
    triple: CartanTriple
    rank: tuple
    # mats[(i, j)]: tuple of r_i rows, each a tuple of b_ij*r_j entries in H_i
    mats: tuple  # sorted tuple of ((i, j), rows)

    @property
    def field(self) -> GF:
        return gf(self.q)

    def mat(self, i: int, j: int):
        return dict(self.mats)[(i, j)]

    def total_dim(self) -> int:
        return sum(d * r for d, r in zip(self.triple.D, self.rank))

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "rank": list(self.rank),
            "structure": {f"{i + 1},{j + 1}": [[list(e) for e in row]
                                               for row in rows]
                          for (i, j), rows in self.mats},
        }


def _check_shapes(t: CartanTriple, rank, mats):
    for (i, j), rows in mats.items():
        if (i, j) not in t.omega:
            raise ShapeMismatch(f"no edge {(i, j)} in the orientation")
        bij = t.B[i][j]
        if len(rows) != rank[i] or any(len(r) != bij * rank[j] for r in rows):
            raise ShapeMismatch(f"matrix at edge {(i, j)} has wrong shape")
        for row in rows:
            for e in row:
                if len(e) != t.D[i]:
                    raise ShapeMismatch(f"entry at edge {(i, j)} not in H_{i}")
    for (i, j) in t.omega:
        if (i, j) not in mats:
            raise ShapeMismatch(f"missing matrix for edge {(i, j)}")


def make_module(t: CartanTriple, rank: Sequence[int], q: int,
                structure: Optional[dict] = None,
                rng: Optional[random.Random] = None) -> FqModule:
    """Explicit or uniformly random module of the given rank."""
    if q not in _SUPPORTED_Q:
        raise ShapeMismatch(f"field size {q} not supported")
    rank = tuple(int(x) for x in rank)
    assert all(x >= 0 for x in rank)
    if structure is None:
        rng = rng or random.Random(0)
        structure = {}
        for (i, j) in t.omega:
            bij = t.B[i][j]
            structure[(i, j)] = tuple(
                tuple(tuple(rng.randrange(q) for _ in range(t.D[i]))
                      for _ in range(bij * rank[j]))
                for _ in range(rank[i]))
    else:
        structure = {k: tuple(tuple(tuple(e) for e in row) for row in rows)
                     for k, rows in structure.items()}
    _check_shapes(t, rank, structure)
    return FqModule(q=q, triple=t, rank=rank,
                    mats=tuple(sorted(structure.items())))


def module_from_json(t: CartanTriple, obj: dict) -> FqModule:
    structure = {}
    for key, rows in obj["structure"].items():
        i, j = (int(x) - 1 for x in key.split(","))
        structure[(i, j)] = [[tuple(e) for e in row] for row in rows]
    return make_module(t, obj["rank"], int(obj["q"]), structure)


def zero_structure(t: CartanTriple, rank: Sequence[int], q: int) -> FqModule:
    """Direct sum of pseudo-simples E_i^{r_i}."""
    structure = {(i, j): tuple(tuple((0,) * t.D[i]
                                     for _ in range(t.B[i][j] * rank[j]))
                               for _ in range(rank[i]))
                 for (i, j) in t.omega}
    return make_module(t, rank, q, structure)


def apply_edge(M: FqModule, i: int, j: int, t_idx: int, s: int, vec):
    """Image of (1 (x) eps_j^s)_t (x) v under the structure map of (i, j).

    `vec` is an element of M_j (tuple of H_j entries); returns an element
    of M_i.
    """
    t = M.triple
    F = M.field
    g, fij, fji = edge_params(t, i, j)
    rows = M.mat(i, j)
    di, dj = t.D[i], t.D[j]
    out = [h_zero(di) for _ in range(len(rows))]
    for ell, coeff in enumerate(vec):
        for a in range(dj):
            c = coeff[a]
            if not c:
                continue
            s2 = (s + a) % fij
            shift = fji * ((s + a) // fij)
            if shift >= di:
                continue
            col = (ell * g + t_idx) * fij + s2
            for r in range(len(rows)):
                entry = h_shift(F, rows[r][col], shift)
                out[r] = h_add(F, out[r], h_scale(F, c, entry))
    return tuple(out)


# --- Hom / Ext --------------------------------------------------------------

def _hom_matrix(M: FqModule, N: FqModule):
    """K-linear intertwiner system; returns (rows, V, E).

    Unknowns: coefficient of eps_i^e in f_i[lp, l] for all vertices i,
    lp < rank(N)_i, l < rank(M)_i, e < d_i.
    """
    assert M.triple.omega == N.triple.omega and M.q == N.q
    t = M.triple
    F = M.field
    n = t.n
    off = []
    V = 0
    for i in range(n):
        off.append(V)
        V += t.D[i] * N.rank[i] * M.rank[i]

    def unk(i, lp, l, e):
        return off[i] + (lp * M.rank[i] + l) * t.D[i] + e

    rows: List[List[int]] = []
    for (i, j) in sorted(t.omega):
        g, fij, fji = edge_params(t, i, j)
        di, dj = t.D[i], t.D[j]
        Mij = M.mat(i, j)
        Nij = N.mat(i, j)
        for ell in range(M.rank[j]):
            for t_idx in range(g):
                for s in range(fij):
                    col = (ell * g + t_idx) * fij + s
                    for rho in range(N.rank[i]):
                        for e in range(di):
                            row = [0] * V
                            # f_i o M_ij
                            for u in range(M.rank[i]):
                                ent = Mij[u][col]
                                for e1 in range(e + 1):
                                    c = ent[e - e1]
                                    if c:
                                        ix = unk(i, rho, u, e1)
                                        row[ix] = F.add[row[ix]][c]
                            # - N_ij o (id (x) f_j)
                            for a in range(dj):
                                s2 = (s + a) % fij
                                shift = fji * ((s + a) // fij)
                                e1 = e - shift
                                if not 0 <= e1 < di:
                                    continue
                                for lp in range(N.rank[j]):
                                    c = Nij[rho][(lp * g + t_idx) * fij + s2][e1]
                                    if c:
                                        ix = unk(j, lp, ell, a)
                                        row[ix] = F.sub[row[ix]][c]
                            if any(row):
                                rows.append(row)
    E = sum(t.D[i] * t.B[i][j] * N.rank[i] * M.rank[j]
            for (i, j) in t.omega)
    return rows, V, E


def hom_dim(M: FqModule, N: FqModule) -> int:
    rows, V, _ = _hom_matrix(M, N)
    return V - gf_rank(M.field, rows, V)


def ext1_dim(M: FqModule, N: FqModule) -> int:
    rows, V, E = _hom_matrix(M, N)
    return E - gf_rank(M.field, rows, V)


def end_dim(M: FqModule) -> int:
    return hom_dim(M, M)


def euler_form(t: CartanTriple, m: Sequence[int], n: Sequence[int]) -> int:
    """<M, N> = hom(M, N) - ext1(M, N) from the rank vectors alone."""
    return (sum(t.D[i] * m[i] * n[i] for i in range(t.n))
            - sum(t.D[i] * t.B[i][j] * n[i] * m[j] for (i, j) in t.omega))


def is_rigid(M: FqModule) -> bool:
    return end_dim(M) == euler_form(M.triple, M.rank, M.rank)


def sample_rigid(t: CartanTriple, rank: Sequence[int], q: int,
                 rng: random.Random, tries: int = 60) -> FqModule:
    """Random module of the given rank that is rigid (open orbit)."""
    for _ in range(tries):
        M = make_module(t, rank, q, rng=rng)
        if is_rigid(M):
            return M
    raise TooLarge(f"no rigid module of rank {tuple(rank)} found over F_{q}")


# --- reflection functors ----------------------------------------------------

def _kernel_free(F: GF, W: List[List], d: int, ncols: int):
    """Free kernel of an H-matrix (H = F_q[eps]/(eps^d)) by column ops.

    Returns a list of kernel basis columns (each a length-ncols tuple of
    H-elements); raises NotLocallyFreeResult when the kernel is not free.
    """
    W = [list(r) for r in W]
    nrows = len(W)
    V = [[h_one(d) if a == b else h_zero(d) for b in range(ncols)]
         for a in range(ncols)]
    used_rows: set = set()
    used_cols: set = set()
    while True:
        piv = next(((r, c) for c in range(ncols) if c not in used_cols
                    for r in range(nrows) if r not in used_rows
                    and h_is_unit(W[r][c])), None)
        if piv is None:
            break
        r0, c0 = piv
        inv = h_inv(F, W[r0][c0])
        for r in range(nrows):
            W[r][c0] = h_mul(F, W[r][c0], inv)
        for a in range(ncols):
            V[a][c0] = h_mul(F, V[a][c0], inv)
        for c in range(ncols):
            if c != c0:
                f = W[r0][c]
                if any(f):
                    for r in range(nrows):
                        W[r][c] = h_sub(F, W[r][c], h_mul(F, f, W[r][c0]))
                    for a in range(ncols):
                        V[a][c] = h_sub(F, V[a][c], h_mul(F, f, V[a][c0]))
        used_rows.add(r0)
        used_cols.add(c0)
    basis = []
    for c in range(ncols):
        if c in used_cols:
            continue
        if any(any(W[r][c]) for r in range(nrows)):
            raise NotLocallyFreeResult("kernel of the boundary map is not free")
        basis.append(tuple(V[a][c] for a in range(ncols)))
    return basis


def _cokernel_free(F: GF, A: List[List], d: int):
    """Free cokernel of an H-matrix by row ops; returns the projection rows.

    Each returned row is a length-nrows tuple of H-elements: the component
    of the quotient map H^nrows -> coker.
    """
    A = [list(r) for r in A]
    nrows = len(A)
    ncols = len(A[0]) if nrows else 0
    U = [[h_one(d) if a == b else h_zero(d) for b in range(nrows)]
         for a in range(nrows)]
    used_rows: set = set()
    used_cols: set = set()
    while True:
        piv = next(((r, c) for r in range(nrows) if r not in used_rows
                    for c in range(ncols) if c not in used_cols
                    and h_is_unit(A[r][c])), None)
        if piv is None:
            break
        r0, c0 = piv
        inv = h_inv(F, A[r0][c0])
        A[r0] = [h_mul(F, inv, x) for x in A[r0]]
        U[r0] = [h_mul(F, inv, x) for x in U[r0]]
        for r in range(nrows):
            if r != r0:
                f = A[r][c0]
                if any(f):
                    A[r] = [h_sub(F, x, h_mul(F, f, y))
                            for x, y in zip(A[r], A[r0])]
                    U[r] = [h_sub(F, x, h_mul(F, f, y))
                            for x, y in zip(U[r], U[r0])]
        used_rows.add(r0)
        used_cols.add(c0)
    out = []
    for r in range(nrows):
        if r in used_rows:
            continue
        if any(any(x) for x in A[r]):
            raise NotLocallyFreeResult("cokernel of the boundary map is not free")
        out.append(tuple(U[r]))
    return out


def reflect_module(M: FqModule, k: int) -> FqModule:
    """BGP-style reflection functor at a sink or source vertex."""
    t = M.triple
    if t.is_sink(k):
        return _reflect_sink(M, k)
    if t.is_source(k):
        return _reflect_source(M, k)
    raise NotSinkOrSource(f"vertex {k} is neither sink nor source")


def _reflect_sink(M: FqModule, k: int) -> FqModule:
    t = M.triple
    F = M.field
    dk = t.D[k]
    in_edges = sorted(j for (i, j) in t.omega if i == k)
    # boundary W: (+)_j kHj (x) M_j -> M_k over H_k
    offs = {}
    total = 0
    for j in in_edges:
        offs[j] = total
        total += t.B[k][j] * M.rank[j]
    W = [[h_zero(dk)] * total for _ in range(M.rank[k])]
    for j in in_edges:
        rows = M.mat(k, j)
        for r in range(M.rank[k]):
            for c in range(len(rows[r])):
                W[r][offs[j] + c] = rows[r][c]
    kernel = _kernel_free(F, W, dk, total)
    rk2 = len(kernel)
    t2 = reflect_orientation(t, k)
    rank2 = list(M.rank)
    rank2[k] = rk2
    structure = {(i, j): M.mat(i, j) for (i, j) in t.omega if k not in (i, j)}
    for j in in_edges:
        g, fkj, fjk = edge_params(t, k, j)
        dj = t.D[j]
        bjk = t2.B[j][k]
        rows = [[h_zero(dj) for _ in range(bjk * rk2)]
                for _ in range(M.rank[j])]
        for c, kappa in enumerate(kernel):
            for t_idx in range(g):
                for s in range(fkj):
                    for ell in range(M.rank[j]):
                        lam = kappa[offs[j] + (ell * g + t_idx) * fkj + s]
                        for w in range(dk):
                            if not lam[w]:
                                continue
                            for u in range(fjk):
                                if (u + w) % fjk != fjk - 1:
                                    continue
                                exp = fkj * ((u + w) // fjk) + s
                                if exp >= dj:
                                    continue
                                col = (c * g + t_idx) * fjk + u
                                add = [0] * dj
                                add[exp] = lam[w]
                                rows[ell][col] = h_add(F, rows[ell][col],
                                                       tuple(add))
        structure[(j, k)] = tuple(tuple(r) for r in rows)
    return make_module(t2, rank2, M.q, structure)


def _adjoint_block(M: FqModule, j: int, k: int):
    """Adjoint H_k-matrix of the structure map on edge (j, k) (k source).

    Shape (|c_kj| * r_j) x r_k: the component of M_k -> kHj (x) M_j.
    """
    t = M.triple
    dk, dj = t.D[k], t.D[j]
    g, fjk, fkj = edge_params(t, j, k)
    # note: edge (j, k) has f_jk = |c_jk|/g and f_kj = |c_kj|/g
    rows_jk = M.mat(j, k)
    rows = [[h_zero(dk) for _ in range(M.rank[k])]
            for _ in range(fkj * g * M.rank[j])]
    for ell in range(M.rank[j]):
        for t_idx in range(g):
            for s in range(fkj):
                ridx = (ell * g + t_idx) * fkj + s
                for c in range(M.rank[k]):
                    coeffs = [0] * dk
                    for w in range(dk):
                        u = fjk - 1 - (w % fjk)
                        a = w // fjk
                        exp = fkj * a + s
                        if exp < dj:
                            col = (c * g + t_idx) * fjk + u
                            coeffs[w] = rows_jk[ell][col][exp]
                    rows[ridx][c] = tuple(coeffs)
    return rows


def _reflect_source(M: FqModule, k: int) -> FqModule:
    t = M.triple
    F = M.field
    dk = t.D[k]
    out_edges = sorted(i for (i, j) in t.omega if j == k)
    offs = {}
    total = 0
    for j in out_edges:
        offs[j] = total
        total += abs(t.C[k][j]) * M.rank[j]
    A = [[h_zero(dk)] * M.rank[k] for _ in range(total)]
    for j in out_edges:
        block = _adjoint_block(M, j, k)
        for r, row in enumerate(block):
            A[offs[j] + r] = list(row)
    proj = _cokernel_free(F, A, dk)
    rk2 = len(proj)
    t2 = reflect_orientation(t, k)
    rank2 = list(M.rank)
    rank2[k] = rk2
    structure = {(i, j): M.mat(i, j) for (i, j) in t.omega if k not in (i, j)}
    for j in out_edges:
        g, fkj, fjk = edge_params(t2, k, j)
        bkj = t2.B[k][j]
        rows = [[h_zero(dk) for _ in range(bkj * M.rank[j])]
                for _ in range(rk2)]
        for r, urow in enumerate(proj):
            for ell in range(M.rank[j]):
                for t_idx in range(g):
                    for s in range(fkj):
                        idx = (ell * g + t_idx) * fkj + s
                        rows[r][idx] = urow[offs[j] + idx]
        structure[(k, j)] = tuple(tuple(r) for r in rows)
    return make_module(t2, rank2, M.q, structure)


# --- locally free submodule counting ----------------------------------------

def _free_submodule_gens(F: GF, d: int, r: int, e: int):
    """Canonical generator matrices of free rank-e H-submodules of H^r.

    Columns are generators; pivot rows carry the identity, entries above a
    pivot lie in eps*H, entries in non-pivot rows below are arbitrary.
    Yields r x e matrices of H-elements.
    """
    if e == 0:
        yield []
        return
    for pivots in itertools.combinations(range(r), e):
        free_pos = []
        for x in range(r):
            if x in pivots:
                continue
            for b in range(e):
                lo = 1 if x < pivots[b] else 0
                free_pos.append((x, b, lo))
        ranges = [range(F.q ** (d - lo)) for _, _, lo in free_pos]
        for combo in itertools.product(*ranges):
            G = [[h_zero(d) for _ in range(e)] for _ in range(r)]
            for b, p in enumerate(pivots):
                G[p][b] = h_one(d)
            for (x, b, lo), code in zip(free_pos, combo):
                coeffs = [0] * d
                for pos in range(lo, d):
                    coeffs[pos] = code % F.q
                    code //= F.q
                G[x][b] = tuple(coeffs)
            yield G


def enumerate_submodules(M: FqModule, e: Sequence[int],
                         max_total_dim: int = 10) -> int:
    """Number of locally free submodules of rank e (an F_q point count)."""
    t = M.triple
    F = M.field
    e = tuple(int(x) for x in e)
    if M.total_dim() > max_total_dim:
        raise TooLarge(f"total dimension {M.total_dim()} exceeds bound")
    if any(not 0 <= e[i] <= M.rank[i] for i in range(t.n)):
        return 0

    # process sources first so closure can be checked as soon as both
    # endpoints of an edge are chosen
    order = []
    remaining = set(range(t.n))
    incoming = {v: {j for (i, j) in t.omega if i == v} for v in range(t.n)}
    while remaining:
        ready = sorted(v for v in remaining if not (incoming[v] & remaining))
        order.append(ready[0])
        remaining.discard(order[-1])

    pos = {v: idx for idx, v in enumerate(order)}
    count = 0
    spans: List[Optional[_RrefSpan]] = [None] * t.n
    gens: List[Optional[list]] = [None] * t.n

    def flatten(i, vec):
        out = []
        for h in vec:
            out.extend(h)
        return out

    def span_of(i, G):
        sp = _RrefSpan(F, t.D[i] * M.rank[i])
        for b in range(len(G[0]) if G else 0):
            col = tuple(G[x][b] for x in range(M.rank[i]))
            for sh in range(t.D[i]):
                sp.add(flatten(i, tuple(h_shift(F, h, sh) for h in col)))
        return sp

    def closed_at(i) -> bool:
        # all edges (i, j) with j already chosen: image of N_j inside N_i
        for (a, j) in t.omega:
            if a != i or gens[j] is None:
                continue
            g, fij, _ = edge_params(t, i, j)
            for b in range(e[j]):
                col = tuple(gens[j][x][b] for x in range(M.rank[j]))
                for t_idx in range(g):
                    for s in range(fij):
                        img = apply_edge(M, i, j, t_idx, s, col)
                        if not spans[i].contains(flatten(i, img)):
                            return False
        return True

    def rec(idx: int):
        nonlocal count
        if idx == t.n:
            count += 1
            return
        i = order[idx]
        for G in _free_submodule_gens(F, t.D[i], M.rank[i], e[i]):
            gens[i] = G if G else [[] for _ in range(M.rank[i])]
            spans[i] = span_of(i, gens[i])
            if closed_at(i):
                rec(idx + 1)
        gens[i] = None
        spans[i] = None

    rec(0)
    return count


# --- F-polynomial oracle ----------------------------------------------------

def _sub_ranks(rank):
    return itertools.product(*(range(x + 1) for x in rank))


def grassmannian_degree_bound(t: CartanTriple, rank, e) -> int:
    return sum(t.D[i] * e[i] * (rank[i] - e[i]) for i in range(t.n))


def _interpolate_counts(qs, counts, bound: int, label: str) -> int:
    """Fit a degree <= bound polynomial; check spare points; value at 1."""
    if len(qs) < bound + 2:
        raise TooLarge(f"need {bound + 2} fields for degree {bound} at {label}")
    pts = list(zip(qs, counts))[: bound + 1]
    # Lagrange interpolation at q = 1 and at the spare points
    def eval_at(x):
        total = Fraction(0)
        for i, (xi, yi) in enumerate(pts):
            term = Fraction(yi)
            for j, (xj, _) in enumerate(pts):
                if i != j:
                    term *= Fraction(x - xj, xi - xj)
            total += term
        return total
    for q_extra, c_extra in list(zip(qs, counts))[bound + 1:]:
        if eval_at(q_extra) != c_extra:
            raise InterpolationInconsistent(
                f"count at q={q_extra} off the degree-{bound} fit for {label}")
    val = eval_at(1)
    if val.denominator != 1:
        raise InterpolationInconsistent(f"non-integer value at q=1 for {label}")
    return int(val)


def f_poly_oracle(modules: Dict[int, FqModule], rank: Sequence[int],
                  max_total_dim: int = 10) -> LaurentPoly:
    """F-polynomial from submodule counts over several fields.

    `modules` maps q to a module of the given rank (one per field, same
    isomorphism class expected across fields, e.g. the rigid one).
    """
    rank = tuple(int(x) for x in rank)
    qs = sorted(modules)
    t = next(iter(modules.values())).triple
    n = t.n
    F = LaurentPoly.zero(n)
    for e in _sub_ranks(rank):
        bound = grassmannian_degree_bound(t, rank, e)
        counts = [enumerate_submodules(modules[q], e, max_total_dim)
                  for q in qs]
        chi = _interpolate_counts(qs, counts, bound, f"e={e}")
        if chi:
            F = F + LaurentPoly.monomial(n, list(e), chi)
    assert F.constant_term() == 1, "oracle F-polynomial not pointed"
    return F


def rigid_f_poly(t: CartanTriple, rank: Sequence[int], rng: random.Random,
                 qlist: Sequence[int] = _SUPPORTED_Q,
                 max_total_dim: int = 10) -> LaurentPoly:
    """Oracle F-polynomial of the rigid module of the given rank."""
    modules = {q: sample_rigid(t, rank, q, rng) for q in qlist}
    return f_poly_oracle(modules, rank, max_total_dim)


def _generic_counts(t: CartanTriple, rank, q: int, rng: random.Random,
                    sub_ranks, samples: int, max_total_dim: int) -> tuple:
    """Count vector of a generic module over F_q.

    Generic modules have maximal orbit dimension, hence minimal End; among
    the samples we keep the minimal-End ones and require the winning count
    vector to be confirmed at least twice.
    """
    votes: Dict[tuple, int] = {}
    best_end = None
    rounds = 0
    while True:
        for _ in range(samples):
            M = make_module(t, rank, q, rng=rng)
            ed = end_dim(M)
            if best_end is None or ed < best_end:
                best_end = ed
                votes = {}
            if ed == best_end:
                cv = tuple(enumerate_submodules(M, e, max_total_dim)
                           for e in sub_ranks)
                votes[cv] = votes.get(cv, 0) + 1
        winner = max(votes, key=lambda k: votes[k])
        if votes[winner] >= 2 or rounds >= 3:
            return winner
        rounds += 1


def generic_f_poly(t: CartanTriple, rank: Sequence[int], rng: random.Random,
                   qlist: Sequence[int] = _SUPPORTED_Q, samples: int = 12,
                   max_total_dim: int = 10, attempts: int = 3) -> LaurentPoly:
    """Oracle F-polynomial of a generic module of the given rank.

    Interpolation inconsistency signals a non-generic sample; the whole
    field sweep is then resampled before giving up.
    """
    rank = tuple(int(x) for x in rank)
    sub_ranks = list(_sub_ranks(rank))
    qs = sorted(qlist)
    last = None
    for attempt in range(attempts):
        per_q = {q: _generic_counts(t, rank, q, rng, sub_ranks,
                                    samples * (attempt + 1), max_total_dim)
                 for q in qs}
        try:
            F = LaurentPoly.zero(t.n)
            for idx, e in enumerate(sub_ranks):
                bound = grassmannian_degree_bound(t, rank, e)
                counts = [per_q[q][idx] for q in qs]
                chi = _interpolate_counts(qs, counts, bound, f"generic e={e}")
                if chi:
                    F = F + LaurentPoly.monomial(t.n, list(e), chi)
            assert F.constant_term() == 1, "generic F-polynomial not pointed"
            return F
        except InterpolationInconsistent as exc:
            last = exc
    raise last


# --- Ext-vanishing oracle ---------------------------------------------------

class CompatibilityOracle:
    """Decides Ext^1-vanishing between rigid modules of given rank vectors.

    Rigid representatives are sampled once per rank and field; pairwise
    results are cached.  Small instances are cross-checked over a second
    field, since Hom/Ext dimensions of rigid modules do not depend on the
    ground field.
    """

    def __init__(self, t: CartanTriple, rng: random.Random,
                 q: int = 5, q_check: int = 3, check_dim_bound: int = 16):
        self.t = t
        self.rng = rng
        self.q = q
        self.q_check = q_check
        self.check_dim_bound = check_dim_bound
        self._rigid: Dict[Tuple[tuple, int], FqModule] = {}
        self._compat: Dict[Tuple[tuple, tuple], bool] = {}
        self.queries = 0

    def rigid(self, rank: tuple, q: int) -> FqModule:
        key = (tuple(rank), q)
        if key not in self._rigid:
            self._rigid[key] = sample_rigid(self.t, rank, q, self.rng)
        return self._rigid[key]

    def ext_vanishes(self, a: tuple, b: tuple, q: int) -> bool:
        return ext1_dim(self.rigid(a, q), self.rigid(b, q)) == 0

    def compatible(self, a: Sequence[int], b: Sequence[int]) -> bool:
        a, b = tuple(a), tuple(b)
        key = (a, b) if a <= b else (b, a)
        if key not in self._compat:
            self.queries += 1
            res = self.ext_vanishes(a, b, self.q) and \
                self.ext_vanishes(b, a, self.q)
            dim = sum(d * (x + y) for d, x, y in zip(self.t.D, a, b))
            if dim <= self.check_dim_bound:
                res2 = self.ext_vanishes(a, b, self.q_check) and \
                    self.ext_vanishes(b, a, self.q_check)
                assert res == res2, \
                    f"Ext-vanishing disagrees between fields for {a}, {b}"
            self._compat[key] = res
        return self._compat[key]
