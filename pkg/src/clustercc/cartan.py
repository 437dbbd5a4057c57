"""Validated Cartan triples (C, D, Omega).

A triple consists of a symmetrizable generalized Cartan matrix C, a left
symmetrizer D (positive diagonal, D*C symmetric) and an acyclic orientation
Omega of the underlying diagram.  A pair (i, j) in Omega means the edge
between i and j is oriented j -> i.  Validation relabels vertices by a
topological order so that (i, j) in Omega implies i < j: vertex 0 is then a
sink and vertex n-1 a source.  Triples produced by reflections keep the
labels and are in general not normalized.

Everything is 0-indexed internally; the CLI translates 1-indexed input.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd

from .errors import BadOrientation, NonCartan, NotAffine, NotSinkOrSource, NotSymmetrizer

KIND_FINITE = "Finite"
KIND_AFFINE = "Affine"
KIND_INDEFINITE = "Indefinite"


@dataclass(frozen=True)
class CartanTriple:
    n: int
    C: tuple          # n x n, rows as tuples
    D: tuple          # symmetrizer diagonal d_i
    omega: frozenset  # ordered pairs (i, j), edge oriented j -> i
    B: tuple          # derived exchange matrix
    kind: str
    perm: tuple       # perm[new_index] = original input index

    @property
    def normalized(self) -> bool:
        return all(i < j for i, j in self.omega)

    def is_sink(self, k: int) -> bool:
        """k is a sink iff k is never the tail of an edge ((i, j) = j -> i)."""
        return all(j != k for _, j in self.omega)

    def is_source(self, k: int) -> bool:
        return all(i != k for i, _ in self.omega)

    def neighbors(self, k: int):
        return sorted({i if j == k else j for i, j in self.omega if k in (i, j)})

    def describe(self) -> dict:
        return {
            "n": self.n,
            "cartan": [list(r) for r in self.C],
            "symmetrizer": list(self.D),
            "orientation": sorted([i + 1, j + 1] for i, j in self.omega),
            "kind": self.kind,
            "relabeling": [p + 1 for p in self.perm],
            "exchange_matrix": [list(r) for r in self.B],
        }


def _exchange_matrix(n: int, C, omega) -> tuple:
    B = [[0] * n for _ in range(n)]
    for i, j in omega:
        B[i][j] = -C[i][j]
        B[j][i] = C[j][i]
    return tuple(tuple(r) for r in B)


def _rank(rows) -> int:
    """Exact rank of a rational matrix (list of lists of Fractions)."""
    m = [list(map(Fraction, r)) for r in rows]
    nrow = len(m)
    ncol = len(m[0]) if nrow else 0
    rank = 0
    col = 0
    while rank < nrow and col < ncol:
        piv = next((r for r in range(rank, nrow) if m[r][col] != 0), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [x * inv for x in m[rank]]
        for r in range(nrow):
            if r != rank and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
        col += 1
    return rank


def _det(rows) -> Fraction:
    m = [list(map(Fraction, r)) for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            if m[r][c] != 0:
                f = m[r][c] * inv
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return det


def _classify(n: int, C, D) -> str:
    S = [[D[i] * C[i][j] for j in range(n)] for i in range(n)]
    # positive definite <=> all leading principal minors positive
    if all(_det([r[: k + 1] for r in S[: k + 1]]) > 0 for k in range(n)):
        return KIND_FINITE
    # psd <=> every principal minor is nonnegative (exact, desk-scale n)
    for size in range(1, n + 1):
        for idx in combinations(range(n), size):
            sub = [[S[i][j] for j in idx] for i in idx]
            if _det(sub) < 0:
                return KIND_INDEFINITE
    if _rank(S) == n - 1:
        return KIND_AFFINE
    return KIND_INDEFINITE


def validate(C, D, omega) -> CartanTriple:
    """Validate (C, D, Omega), relabel topologically, classify the type.

    `omega` contains 0-indexed pairs (i, j) for edges oriented j -> i.
    """
    n = len(C)
    if n == 0 or any(len(r) != n for r in C):
        raise NonCartan("C must be square and nonempty")
    C = [[int(x) for x in r] for r in C]
    for i in range(n):
        if C[i][i] != 2:
            raise NonCartan(f"diagonal entry C[{i}][{i}] != 2")
        for j in range(n):
            if i != j:
                if C[i][j] > 0:
                    raise NonCartan("positive off-diagonal entry")
                if (C[i][j] == 0) != (C[j][i] == 0):
                    raise NonCartan("zero pattern not symmetric")
    if len(D) != n or any(int(d) <= 0 for d in D):
        raise NotSymmetrizer("D must be a positive diagonal of length n")
    D = [int(d) for d in D]
    for i in range(n):
        for j in range(n):
            if D[i] * C[i][j] != D[j] * C[j][i]:
                raise NotSymmetrizer("D*C is not symmetric")

    pairs = {tuple(p) for p in omega}
    for i, j in pairs:
        if not (0 <= i < n and 0 <= j < n) or i == j:
            raise BadOrientation(f"invalid pair {(i, j)}")
        if C[i][j] == 0:
            raise BadOrientation(f"pair {(i, j)} has no edge")
        if (j, i) in pairs:
            raise BadOrientation(f"edge {(i, j)} oriented both ways")
    for i in range(n):
        for j in range(i + 1, n):
            if C[i][j] < 0 and (i, j) not in pairs and (j, i) not in pairs:
                raise BadOrientation(f"edge {{{i},{j}}} not oriented")

    # topological order of the graph with edges j -> i for (i, j) in omega;
    # sinks get the smallest labels, so (i, j) in omega implies i < j.
    out = {v: set() for v in range(n)}   # arrows leaving v
    for i, j in pairs:
        out[j].add(i)
    order = []
    remaining = set(range(n))
    while remaining:
        sinks = sorted(v for v in remaining
                       if not (out[v] & remaining))
        if not sinks:
            raise BadOrientation("orientation has an oriented cycle")
        order.append(sinks[0])
        remaining.discard(sinks[0])
    pos = {old: new for new, old in enumerate(order)}
    C2 = [[C[order[i]][order[j]] for j in range(n)] for i in range(n)]
    D2 = [D[order[i]] for i in range(n)]
    omega2 = frozenset((pos[i], pos[j]) for i, j in pairs)
    kind = _classify(n, C2, D2)
    return CartanTriple(
        n=n,
        C=tuple(tuple(r) for r in C2),
        D=tuple(D2),
        omega=omega2,
        B=_exchange_matrix(n, C2, omega2),
        kind=kind,
        perm=tuple(order),
    )


def null_root(t: CartanTriple) -> tuple:
    """Primitive positive generator of ker(C) (equivalently ker(D*C))."""
    if t.kind != KIND_AFFINE:
        raise NotAffine(f"null root defined for affine type, got {t.kind}")
    n = t.n
    m = [list(map(Fraction, r)) for r in t.C]
    # reduced row echelon form
    pivots = []
    rank = 0
    for col in range(n):
        piv = next((r for r in range(rank, n) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [x * inv for x in m[rank]]
        for r in range(n):
            if r != rank and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(n) if c not in pivots]
    assert len(free) == 1, "affine kernel must be one-dimensional"
    fc = free[0]
    v = [Fraction(0)] * n
    v[fc] = Fraction(1)
    for r, col in enumerate(pivots):
        v[col] = -m[r][fc]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    if sum(ints) < 0:
        ints = [-x for x in ints]
    assert all(x >= 0 for x in ints), "null root must be positive"
    return tuple(ints)


def reflect_orientation(t: CartanTriple, k: int) -> CartanTriple:
    """Flip all edges at vertex k (k must be a sink or a source)."""
    if not (t.is_sink(k) or t.is_source(k)):
        raise NotSinkOrSource(f"vertex {k} is neither sink nor source")
    omega = frozenset(
        (j, i) if k in (i, j) else (i, j) for i, j in t.omega)
    return CartanTriple(
        n=t.n, C=t.C, D=t.D, omega=omega,
        B=_exchange_matrix(t.n, t.C, omega),
        kind=t.kind, perm=t.perm)


def subtriple(t: CartanTriple, drop: int) -> CartanTriple:
    """Restrict to the vertices != drop, keeping relative order and labels."""
    keep = [v for v in range(t.n) if v != drop]
    idx = {v: i for i, v in enumerate(keep)}
    C = [[t.C[a][b] for b in keep] for a in keep]
    D = [t.D[a] for a in keep]
    omega = frozenset((idx[i], idx[j]) for i, j in t.omega
                      if drop not in (i, j))
    n = len(keep)
    return CartanTriple(
        n=n, C=tuple(tuple(r) for r in C), D=tuple(D), omega=omega,
        B=_exchange_matrix(n, C, omega),
        kind=_classify(n, C, D), perm=tuple(keep))
