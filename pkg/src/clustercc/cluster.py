"""Seed mutation, principal-coefficient invariants, separation formula.

Seeds carry an extended m x n exchange matrix and n cluster variables that
are exact Laurent polynomials in the m ambient initial variables (the last
m - n of which are frozen).  Every mutation re-derives the new variable in
the ambient Laurent ring and asserts the Laurent phenomenon: the division
by the old variable must be exact and the result polynomial in the frozens.

With principal coefficients (m = 2n, bottom block identity) each variable
determines its F-polynomial, g-vector (graded degree), d-vector (denominator
exponents) and h-vector (tropical evaluation of F).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .cartan import CartanTriple
from .errors import NotHomogeneous, NotLaurent, ShapeMismatch
from .laurent import LaurentPoly, MonomialSub, factored_eq

# Counters for the assertion families the acceptance suite tallies.
assertion_counts = {"laurent": 0, "constant_term": 0, "tropical_sign": 0}


def _plus(x: int) -> int:
    return x if x > 0 else 0


@dataclass(frozen=True)
class ExtendedExchangeMatrix:
    m: int
    n: int
    rows: tuple  # m rows of length n

    def __post_init__(self):
        if len(self.rows) != self.m or any(len(r) != self.n for r in self.rows):
            raise ShapeMismatch("extended matrix must be m x n")
        if self.m < self.n:
            raise ShapeMismatch("need m >= n")

    @property
    def full_rank(self) -> bool:
        mat = [list(map(Fraction, r)) for r in self.rows]
        rank = 0
        for col in range(self.n):
            piv = next((r for r in range(rank, self.m) if mat[r][col] != 0), None)
            if piv is None:
                continue
            mat[rank], mat[piv] = mat[piv], mat[rank]
            inv = 1 / mat[rank][col]
            for r in range(rank + 1, self.m):
                if mat[r][col] != 0:
                    f = mat[r][col] * inv
                    mat[r] = [a - f * b for a, b in zip(mat[r], mat[rank])]
            rank += 1
        return rank == self.n

    def entry(self, i: int, j: int) -> int:
        return self.rows[i][j]

    def top_block(self) -> tuple:
        return self.rows[: self.n]

    def column(self, j: int) -> tuple:
        return tuple(self.rows[i][j] for i in range(self.m))


def principal_matrix(t: CartanTriple) -> ExtendedExchangeMatrix:
    n = t.n
    rows = [tuple(t.B[i]) for i in range(n)]
    rows += [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    return ExtendedExchangeMatrix(m=2 * n, n=n, rows=tuple(rows))


def coefficient_free_matrix(t: CartanTriple) -> ExtendedExchangeMatrix:
    return ExtendedExchangeMatrix(m=t.n, n=t.n, rows=tuple(tuple(r) for r in t.B))


def mutate_matrix(M: ExtendedExchangeMatrix, k: int) -> ExtendedExchangeMatrix:
    rows = []
    for i in range(M.m):
        row = []
        for j in range(M.n):
            b = M.rows[i][j]
            if i == k or j == k:
                row.append(-b)
            else:
                bik = M.rows[i][k]
                bkj = M.rows[k][j]
                if bik > 0:
                    row.append(b + _plus(bik * bkj))
                elif bik < 0:
                    row.append(b - _plus(bik * bkj))
                else:
                    row.append(b)
        rows.append(tuple(row))
    out = ExtendedExchangeMatrix(m=M.m, n=M.n, rows=tuple(rows))
    assert out.full_rank == M.full_rank, "mutation must preserve full rank"
    return out


@dataclass(frozen=True)
class Seed:
    matrix: ExtendedExchangeMatrix
    vars: tuple                       # n LaurentPoly in m ambient variables
    origin: ExtendedExchangeMatrix    # matrix of the initial seed
    path: tuple = ()

    def canonical_key(self):
        order = sorted(range(self.matrix.n), key=lambda i: self.vars[i].sort_key())
        rows = tuple(tuple(r[j] for j in order) for r in self.matrix.rows)
        # rows of the top block must be permuted consistently with columns
        top = tuple(tuple(rows[order[i]][j] for j in range(self.matrix.n))
                    for i in range(self.matrix.n))
        frozen = rows[self.matrix.n:]
        return (top + frozen, tuple(self.vars[i].sort_key() for i in order))


def initial_seed(M: ExtendedExchangeMatrix) -> Seed:
    xs = tuple(LaurentPoly.var(M.m, i) for i in range(M.n))
    return Seed(matrix=M, vars=xs, origin=M, path=())


def _ambient(s: Seed, j: int) -> LaurentPoly:
    if j < s.matrix.n:
        return s.vars[j]
    return LaurentPoly.var(s.matrix.m, j)


def mutate_seed(s: Seed, k: int) -> Seed:
    M = s.matrix
    if not 0 <= k < M.n:
        raise ShapeMismatch(f"mutation direction {k} out of range")
    plus = LaurentPoly.one(M.m)
    minus = LaurentPoly.one(M.m)
    for j in range(M.m):
        b = M.rows[j][k]
        if b > 0:
            plus = plus * _ambient(s, j) ** b
        elif b < 0:
            minus = minus * _ambient(s, j) ** (-b)
    try:
        new_var = (plus + minus).divide_exact(s.vars[k])
    except Exception as exc:
        raise NotLaurent(f"exchange at {k} is not exact: {exc}") from exc
    if not new_var.is_polynomial_in(range(M.n, M.m)):
        raise NotLaurent("mutated variable has a pole at a frozen variable")
    assertion_counts["laurent"] += 1
    new_vars = tuple(new_var if i == k else s.vars[i] for i in range(M.n))
    return Seed(matrix=mutate_matrix(M, k), vars=new_vars,
                origin=s.origin, path=s.path + (k,))


def mutate_along(s: Seed, path) -> Seed:
    for k in path:
        s = mutate_seed(s, k)
    return s


@dataclass(frozen=True)
class PrincipalData:
    F: LaurentPoly  # in y_1..y_n
    g: tuple
    d: tuple
    h: tuple


def principal_data(s: Seed, i: int) -> PrincipalData:
    """Invariants of the i-th cluster variable of a principal-coefficient seed."""
    M0 = s.origin
    n = M0.n
    if M0.m != 2 * n or M0.rows[n:] != tuple(
            tuple(1 if j == a else 0 for j in range(n)) for a in range(n)):
        raise ShapeMismatch("principal_data needs a principal-coefficient origin")
    return variable_data(s.vars[i], M0)


def variable_data(var: LaurentPoly, M0: ExtendedExchangeMatrix) -> PrincipalData:
    n = M0.n
    F2 = var.specialize_ones(range(n))
    F = F2.restrict(range(n, 2 * n))
    ct = F.constant_term()
    if ct != 1:
        raise NotHomogeneous(f"F-polynomial constant term is {ct}, not 1")
    assertion_counts["constant_term"] += 1

    # g: degree under deg x_i = e_i, deg y_i = -(column i of B)
    degy = [tuple(-M0.rows[j][i] for j in range(n)) for i in range(n)]
    g = None
    for e in var.terms:
        deg = [e[j] for j in range(n)]
        for i in range(n):
            c = e[n + i]
            if c:
                for j in range(n):
                    deg[j] += c * degy[i][j]
        deg = tuple(deg)
        if g is None:
            g = deg
        elif g != deg:
            raise NotHomogeneous("variable is not graded-homogeneous")

    lo = var.min_exponents()
    d = tuple(-lo[j] for j in range(n))

    h_images = []
    for i in range(n):
        img = [0] * n
        img[i] -= 1
        for j in range(n):
            img[j] += _plus(-M0.rows[j][i])
        h_images.append(tuple(img))
    h = F.tropical_eval(h_images)
    return PrincipalData(F=F, g=g, d=d, h=h)


def separation(F: LaurentPoly, g, M: ExtendedExchangeMatrix) -> LaurentPoly:
    """Rebuild a cluster variable from (F, g) in the ambient ring of M.

    `g` of length n uses the tropical-denominator normalization; `g` of
    length m is used directly as the pointed monomial exponent.
    """
    n, m = M.n, M.m
    yhat = [M.column(i) for i in range(n)]
    X = F.substitute(MonomialSub.monomials(m, yhat))
    g = tuple(g)
    if len(g) == m:
        return X.mul_monomial(g)
    if len(g) != n:
        raise ShapeMismatch("g-vector length must be n or m")
    exp = list(g) + [0] * (m - n)
    if m > n:
        frozen_imgs = [tuple(M.rows[j][i] for j in range(n, m)) for i in range(n)]
        trop = F.tropical_eval(frozen_imgs)
        assert all(x <= 0 for x in trop), "tropical denominator must be nonpositive"
        assertion_counts["tropical_sign"] += 1
        for j, x in enumerate(trop):
            exp[n + j] -= x
    return X.mul_monomial(exp)


def principal_of_block(B_rows) -> ExtendedExchangeMatrix:
    """Principal-coefficient extension of a bare n x n exchange block."""
    n = len(B_rows)
    rows = [tuple(r) for r in B_rows]
    rows += [tuple(1 if j == a else 0 for j in range(n)) for a in range(n)]
    return ExtendedExchangeMatrix(m=2 * n, n=n, rows=tuple(rows))


def bfs_explore_records(t: CartanTriple, depth: int):
    """Breadth-first exploration from the principal seed with canonical dedup.

    Returns a dict d-vector -> (PrincipalData, path, i) over all non-initial
    cluster variables reached within `depth` mutations.
    """
    M = principal_matrix(t)
    start = initial_seed(M)
    seen = {start.canonical_key()}
    frontier = [start]
    found = {}
    initial_vars = set(start.vars)
    for _ in range(depth):
        nxt = []
        for s in frontier:
            for k in range(M.n):
                s2 = mutate_seed(s, k)
                key = s2.canonical_key()
                if key in seen:
                    continue
                seen.add(key)
                nxt.append(s2)
                for i in range(M.n):
                    if s2.vars[i] in initial_vars:
                        continue
                    data = principal_data(s2, i)
                    prev = found.get(data.d)
                    if prev is None:
                        found[data.d] = (data, s2.path, i)
                    else:
                        assert prev[0] == data, \
                            "distinct variables share a d-vector"
        frontier = nxt
    return found


def bfs_explore(t: CartanTriple, depth: int):
    return {d: rec[0] for d, rec in bfs_explore_records(t, depth).items()}


def dwz_recurrence_check(data0: PrincipalData, data1: PrincipalData,
                         M0: ExtendedExchangeMatrix, k: int) -> dict:
    """Check the mutation recurrence for one variable seen from two adjacent
    initial seeds connected by mutation at k (matrices M0 and mu_k(M0)).

    Verifies the g-vector rule, g_k = h_k - h'_k, and the F-polynomial
    identity under y'_k = 1/y_k, y'_i = y_i y_k^[b_ki]_+ (1+y_k)^(-b_ki).
    """
    n = M0.n
    B = M0.top_block()
    g, h, F = data0.g, data0.h, data0.F
    g2, h2, F2 = data1.g, data1.h, data1.F

    g_rule = list(g)
    g_rule[k] = -g[k]
    for i in range(n):
        if i != k:
            g_rule[i] = g[i] + _plus(B[i][k]) * g[k] - B[i][k] * h[k]
    out = {"g_rule": tuple(g_rule) == tuple(g2),
           "gh_rule": g[k] == h[k] - h2[k]}

    one_plus_yk = LaurentPoly.one(n) + LaurentPoly.var(n, k)
    images = []
    fpows = []
    for i in range(n):
        img = [0] * n
        if i == k:
            img[k] = -1
            fpows.append(0)
        else:
            img[i] = 1
            img[k] = _plus(B[k][i])
            fpows.append(-B[k][i])
        images.append(tuple(img))
    sub = MonomialSub(n, tuple(images), one_plus_yk, tuple(fpows))
    P, pmin = F2.substitute_raw(sub)
    # F2(y') carries an extra factor (1+1/y_k)^(h'_k) = y_k^(-h'_k) (1+y_k)^(h'_k)
    mono = [0] * n
    mono[k] = -h2[k]
    out["f_rule"] = factored_eq(
        F, h[k], (0,) * n,
        P, pmin + h2[k], tuple(mono),
        one_plus_yk)
    out["ok"] = all(out.values())
    return out
