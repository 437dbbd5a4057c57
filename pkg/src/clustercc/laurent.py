"""Exact multivariate Laurent polynomials over arbitrary-precision integers.

Terms are stored as a dict from dense exponent tuples (negative entries
allowed) to nonzero int coefficients.  All operations are pure; values are
hashable once frozen, so they can key seed-deduplication sets.

The one non-obvious operation is :func:`substitute`: each variable is sent to
a Laurent monomial in target variables times an integer power of a single
designated polynomial factor.  Negative factor powers are collected globally
and resolved by one exact division at the end, which turns the division
hypotheses of the mutation recurrences into runtime checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .errors import ArityMismatch, NotDivisible


class LaurentPoly:
    """Immutable exact Laurent polynomial in a fixed number of variables."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[tuple, int]):
        clean = {}
        for e, c in terms.items():
            if c == 0:
                continue
            e = tuple(e)
            if len(e) != nvars:
                raise ArityMismatch(f"exponent {e} has arity {len(e)}, expected {nvars}")
            clean[e] = c
        self.nvars = nvars
        self.terms = clean
        self._hash = None

    # --- constructors ---

    @classmethod
    def zero(cls, nvars: int) -> "LaurentPoly":
        return cls(nvars, {})

    @classmethod
    def const(cls, nvars: int, c: int) -> "LaurentPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def one(cls, nvars: int) -> "LaurentPoly":
        return cls.const(nvars, 1)

    @classmethod
    def monomial(cls, nvars: int, exps: Sequence[int], coef: int = 1) -> "LaurentPoly":
        return cls(nvars, {tuple(exps): coef})

    @classmethod
    def var(cls, nvars: int, i: int) -> "LaurentPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    # --- basic protocol ---

    def __eq__(self, other) -> bool:
        return (isinstance(other, LaurentPoly)
                and self.nvars == other.nvars and self.terms == other.terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, tuple(sorted(self.terms.items()))))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def sort_key(self):
        """Canonical total order key, used for seed canonicalization."""
        return tuple(sorted(self.terms.items()))

    def __repr__(self):
        return f"LaurentPoly({self.nvars}, {self.pretty()})"

    def pretty(self, names: Optional[Sequence[str]] = None) -> str:
        if not self.terms:
            return "0"
        if names is None:
            names = [f"x{i+1}" for i in range(self.nvars)]
        bits = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(
                f"{names[i]}" if p == 1 else f"{names[i]}^{p}"
                for i, p in enumerate(e) if p != 0)
            if not mono:
                bits.append(str(c))
            elif c == 1:
                bits.append(mono)
            elif c == -1:
                bits.append(f"-{mono}")
            else:
                bits.append(f"{c}*{mono}")
        out = " + ".join(bits)
        return out.replace("+ -", "- ")

    # --- ring operations ---

    def _check(self, other: "LaurentPoly"):
        if self.nvars != other.nvars:
            raise ArityMismatch(f"arity {self.nvars} vs {other.nvars}")

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(self.nvars, other)
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return LaurentPoly(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(self.nvars, other)
        self._check(other)
        # iterate over the smaller operand for speed
        a, b = (self.terms, other.terms)
        if len(a) > len(b):
            a, b = b, a
        terms: dict = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = terms.get(e, 0) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    del terms[e]
        return LaurentPoly(self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("exponent must be int")
        if k < 0:
            if len(self.terms) == 1:
                (e, c), = self.terms.items()
                if c in (1, -1):
                    coef = c if k % 2 else 1
                    return LaurentPoly(self.nvars, {tuple(k * x for x in e): coef})
            raise ValueError("negative powers only for unit monomials")
        result = LaurentPoly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_monomial(self, exps: Sequence[int], coef: int = 1) -> "LaurentPoly":
        exps = tuple(exps)
        return LaurentPoly(self.nvars, {
            tuple(x + y for x, y in zip(e, exps)): c * coef
            for e, c in self.terms.items()})

    # --- queries ---

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.nvars, 0)

    def newton_support(self) -> frozenset:
        return frozenset(self.terms)

    def min_exponents(self) -> tuple:
        """Componentwise minimum exponent over all terms (zero poly -> zeros)."""
        if not self.terms:
            return (0,) * self.nvars
        its = iter(self.terms)
        lo = list(next(its))
        for e in its:
            for i, x in enumerate(e):
                if x < lo[i]:
                    lo[i] = x
        return tuple(lo)

    def max_exponents(self) -> tuple:
        if not self.terms:
            return (0,) * self.nvars
        its = iter(self.terms)
        hi = list(next(its))
        for e in its:
            for i, x in enumerate(e):
                if x > hi[i]:
                    hi[i] = x
        return tuple(hi)

    def d_vector(self, which: Optional[Sequence[int]] = None) -> tuple:
        """Negated componentwise minimum exponent, restricted to `which` vars."""
        lo = self.min_exponents()
        if which is None:
            which = range(self.nvars)
        return tuple(-lo[i] for i in which)

    def is_polynomial_in(self, which: Iterable[int]) -> bool:
        lo = self.min_exponents()
        return all(lo[i] >= 0 for i in which)

    # --- specialization / projection ---

    def specialize_ones(self, which: Iterable[int]) -> "LaurentPoly":
        """Evaluate the given variables at 1 (arity preserved)."""
        which = set(which)
        terms: dict = {}
        for e, c in self.terms.items():
            e2 = tuple(0 if i in which else x for i, x in enumerate(e))
            s = terms.get(e2, 0) + c
            if s:
                terms[e2] = s
            else:
                del terms[e2]
        return LaurentPoly(self.nvars, terms)

    def restrict(self, keep: Sequence[int]) -> "LaurentPoly":
        """Project onto the listed variables; other exponents must be zero."""
        keep = list(keep)
        dropped = [i for i in range(self.nvars) if i not in keep]
        terms = {}
        for e, c in self.terms.items():
            if any(e[i] for i in dropped):
                raise ArityMismatch("restrict: nonzero exponent outside kept variables")
            terms[tuple(e[i] for i in keep)] = c
        return LaurentPoly(len(keep), terms)

    def embed(self, nvars: int, positions: Sequence[int]) -> "LaurentPoly":
        """Inject into a larger variable set; variable i goes to positions[i]."""
        terms = {}
        for e, c in self.terms.items():
            e2 = [0] * nvars
            for i, x in enumerate(e):
                e2[positions[i]] = x
            terms[tuple(e2)] = c
        return LaurentPoly(nvars, terms)

    # --- division ---

    def divide_exact(self, q: "LaurentPoly") -> "LaurentPoly":
        """Return r with r*q == self, or raise NotDivisible."""
        self._check(q)
        if not q.terms:
            raise NotDivisible("division by zero")
        if not self.terms:
            return LaurentPoly.zero(self.nvars)
        if len(q.terms) == 1:
            (eq, cq), = q.terms.items()
            terms = {}
            for e, c in self.terms.items():
                if c % cq:
                    raise NotDivisible("coefficient not divisible by monomial divisor")
                terms[tuple(x - y for x, y in zip(e, eq))] = c // cq
            return LaurentPoly(self.nvars, terms)
        # Shift both operands into the polynomial cone, then single-divisor
        # lex division: for an exact multiple the leading terms always cancel.
        sp = self.min_exponents()
        sq = q.min_exponents()
        rem = {tuple(x - y for x, y in zip(e, sp)): c for e, c in self.terms.items()}
        qt = {tuple(x - y for x, y in zip(e, sq)): c for e, c in q.terms.items()}
        lead_q = max(qt)
        cq = qt[lead_q]
        quot: dict = {}
        while rem:
            lead_r = max(rem)
            cr = rem[lead_r]
            t_exp = tuple(x - y for x, y in zip(lead_r, lead_q))
            if any(x < 0 for x in t_exp) or cr % cq:
                raise NotDivisible("remainder is nonzero")
            t_coef = cr // cq
            quot[t_exp] = t_coef
            for e, c in qt.items():
                e2 = tuple(x + y for x, y in zip(e, t_exp))
                s = rem.get(e2, 0) - t_coef * c
                if s:
                    rem[e2] = s
                else:
                    del rem[e2]
        shift = tuple(x - y for x, y in zip(sp, sq))
        return LaurentPoly(self.nvars, {
            tuple(x + y for x, y in zip(e, shift)): c for e, c in quot.items()})

    # --- substitution ---

    def substitute(self, sub: "MonomialSub") -> "LaurentPoly":
        poly, fpow = self.substitute_raw(sub)
        return resolve_factor(poly, sub.factor, fpow)

    def substitute_raw(self, sub: "MonomialSub"):
        """Apply `sub` but leave a global power of the factor unresolved.

        Returns (P, k) with image == P * factor**k exactly (k may be negative).
        Without a factor, k is always 0.
        """
        if len(sub.images) != self.nvars:
            raise ArityMismatch("substitution image count != arity")
        m = sub.target_nvars
        if not self.terms:
            return LaurentPoly.zero(m), 0
        staged = []  # (monomial exponent, coef, factor power)
        for e, c in self.terms.items():
            mono = [0] * m
            p = 0
            for i, x in enumerate(e):
                if x:
                    img = sub.images[i]
                    for j, y in enumerate(img):
                        mono[j] += x * y
                    if sub.factor_pows:
                        p += x * sub.factor_pows[i]
            staged.append((tuple(mono), c, p))
        if sub.factor is None:
            terms: dict = {}
            for mono, c, _ in staged:
                s = terms.get(mono, 0) + c
                if s:
                    terms[mono] = s
                else:
                    del terms[mono]
            return LaurentPoly(m, terms), 0
        pmin = min(p for _, _, p in staged)
        # cache factor powers: exponents p - pmin are small nonnegative ints
        powers = {0: LaurentPoly.one(m)}

        def fpow(k: int) -> LaurentPoly:
            if k not in powers:
                powers[k] = fpow(k - 1) * sub.factor
            return powers[k]

        acc = LaurentPoly.zero(m)
        for mono, c, p in staged:
            acc = acc + fpow(p - pmin).mul_monomial(mono, c)
        return acc, pmin

    # --- tropical evaluation ---

    def tropical_eval(self, images: Sequence[Sequence[int]]) -> tuple:
        """Min-plus evaluation: each variable i is sent to the monomial with
        exponent vector images[i]; terms combine by componentwise minimum."""
        if len(images) != self.nvars:
            raise ArityMismatch("tropical image count != arity")
        if not self.terms:
            raise ValueError("tropical evaluation of zero")
        m = len(images[0]) if images else 0
        best = None
        for e in self.terms:
            v = [0] * m
            for i, x in enumerate(e):
                if x:
                    img = images[i]
                    for j, y in enumerate(img):
                        v[j] += x * y
            if best is None:
                best = v
            else:
                best = [min(a, b) for a, b in zip(best, v)]
        return tuple(best)

    # --- serialization ---

    def to_json(self) -> list:
        return [{"exp": list(e), "coef": str(c)}
                for e, c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, nvars: int, data: Iterable[dict]) -> "LaurentPoly":
        return cls(nvars, {tuple(d["exp"]): int(d["coef"]) for d in data})


@dataclass(frozen=True)
class MonomialSub:
    """Substitution data: variable i maps to the Laurent monomial with
    exponent vector images[i] (over target variables) times
    factor**factor_pows[i]."""

    target_nvars: int
    images: tuple
    factor: Optional[LaurentPoly] = None
    factor_pows: tuple = ()

    @classmethod
    def monomials(cls, target_nvars: int, images: Sequence[Sequence[int]]) -> "MonomialSub":
        return cls(target_nvars, tuple(tuple(v) for v in images))


def resolve_factor(poly: LaurentPoly, factor: Optional[LaurentPoly], k: int) -> LaurentPoly:
    """Return poly * factor**k, performing exact division for k < 0."""
    if factor is None or k == 0:
        return poly
    if k > 0:
        return poly * factor ** k
    return poly.divide_exact(factor ** (-k))


def factored_eq(p1: LaurentPoly, k1: int, m1: Sequence[int],
                p2: LaurentPoly, k2: int, m2: Sequence[int],
                factor: LaurentPoly) -> bool:
    """Decide p1*factor^k1*x^m1 == p2*factor^k2*x^m2 by clearing negatives."""
    k = min(k1, k2)
    lhs = (p1 * factor ** (k1 - k)).mul_monomial(m1)
    rhs = (p2 * factor ** (k2 - k)).mul_monomial(m2)
    return lhs == rhs
