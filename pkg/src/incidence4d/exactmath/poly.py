"""Sparse multivariate polynomials over the rationals.

A polynomial is a map from exponent tuples to nonzero ``Fraction``
coefficients, together with an ordered tuple of variable names.  Values are
immutable; every operation returns a new polynomial.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from ..errors import DimensionMismatch

XYZW = ("x", "y", "z", "w")
V4 = ("v0", "v1", "v2", "v3")


def Q(value) -> Fraction:
    """Coerce ints, strings like ``"3/4"``, floats (exactly) and Fractions."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def grlex_key(exp: tuple[int, ...]):
    return (sum(exp), exp)


class MultiPoly:
    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, ...], object] | None = None,
                 variables: Sequence[str] = XYZW):
        self.variables = tuple(variables)
        nv = len(self.variables)
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nv:
                raise DimensionMismatch(f"exponent {exp} does not match {nv} variables")
            c = Q(c)
            if c:
                clean[exp] = clean.get(exp, 0) + c
                if not clean[exp]:
                    del clean[exp]
        self.terms = clean
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def constant(cls, c, variables=XYZW) -> "MultiPoly":
        return cls({(0,) * len(variables): c}, variables)

    @classmethod
    def var(cls, name: str, variables=XYZW) -> "MultiPoly":
        variables = tuple(variables)
        i = variables.index(name)
        exp = tuple(1 if j == i else 0 for j in range(len(variables)))
        return cls({exp: 1}, variables)

    @classmethod
    def gens(cls, variables=XYZW) -> list["MultiPoly"]:
        return [cls.var(v, variables) for v in variables]

    @classmethod
    def linear_form(cls, coeffs: Sequence, constant=0, variables=XYZW) -> "MultiPoly":
        nv = len(variables)
        terms = {(0,) * nv: Q(constant)}
        for i, c in enumerate(coeffs):
            terms[tuple(1 if j == i else 0 for j in range(nv))] = Q(c)
        return cls(terms, variables)

    # -- basic properties ---------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, index: int) -> int:
        if not self.terms:
            return -1
        return max(e[index] for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def homogeneous_part(self, d: int) -> "MultiPoly":
        return MultiPoly({e: c for e, c in self.terms.items() if sum(e) == d}, self.variables)

    def coefficient(self, exp: tuple[int, ...]) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    def sorted_terms(self):
        """Terms in descending graded-lexicographic order."""
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                raise DimensionMismatch(f"variables {other.variables} != {self.variables}")
            return other
        return MultiPoly.constant(other, self.variables)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return MultiPoly(terms, self.variables)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({e: -c for e, c in self.terms.items()}, self.variables)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = Q(other)
            return MultiPoly({e: c * v for e, v in self.terms.items()}, self.variables)
        other = self._coerce(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(out, self.variables)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(1, self.variables)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, c):
        c = Q(c)
        return self * (1 / c)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.variables == other.variables and self.terms == other.terms
        try:
            return self == MultiPoly.constant(other, self.variables)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"MultiPoly({format_poly(self)!r}, variables={self.variables})"

    def __str__(self):
        return format_poly(self)

    # -- calculus and evaluation ---------------------------------------------
    def __call__(self, point: Sequence) -> Fraction:
        return poly_eval(self, point)

    def diff(self, axis) -> "MultiPoly":
        return partial_derivative(self, axis)

    def gradient(self) -> list["MultiPoly"]:
        return [self.diff(i) for i in range(self.nvars)]

    def hessian(self) -> list[list["MultiPoly"]]:
        g = self.gradient()
        return [[gi.diff(j) for j in range(self.nvars)] for gi in g]

    def rename(self, variables: Sequence[str]) -> "MultiPoly":
        if len(variables) != self.nvars:
            raise DimensionMismatch("rename must keep the variable count")
        return MultiPoly(self.terms, variables)

    def substitute(self, images: Sequence["MultiPoly"]) -> "MultiPoly":
        """Compose: replace variable i by ``images[i]`` (all sharing one variable set)."""
        if len(images) != self.nvars:
            raise DimensionMismatch("need one image per variable")
        target = images[0].variables
        powers: list[dict[int, MultiPoly]] = [{0: MultiPoly.constant(1, target)} for _ in images]

        def pw(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = pw(i, k - 1) * images[i]
            return cache[k]

        out = MultiPoly({}, target)
        for e, c in self.terms.items():
            term = MultiPoly.constant(c, target)
            for i, k in enumerate(e):
                if k:
                    term = term * pw(i, k)
            out = out + term
        return out

    def shift(self, point: Sequence) -> "MultiPoly":
        """Taylor shift: the polynomial ``u -> f(point + u)`` in the same variables."""
        point = [Q(c) for c in point]
        if len(point) != self.nvars:
            raise DimensionMismatch("shift point dimension mismatch")
        out: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.terms.items():
            # (u_i + p_i)^{e_i} = sum_j C(e_i, j) p_i^{e_i-j} u_i^j
            factors = []
            for ei, pi in zip(e, point):
                factors.append([(j, math.comb(ei, j) * pi ** (ei - j)) for j in range(ei + 1)
                                if pi or j == ei])
            for combo in product(*factors):
                coef = c
                for _, w in combo:
                    coef *= w
                if coef:
                    exp = tuple(j for j, _ in combo)
                    out[exp] = out.get(exp, 0) + coef
        return MultiPoly(out, self.variables)


# -- module level operations ----------------------------------------------


def poly_eval(f: MultiPoly, point: Sequence) -> Fraction:
    if len(point) != f.nvars:
        raise DimensionMismatch(f"point of dimension {len(point)} for {f.nvars} variables")
    pt = [Q(c) for c in point]
    total = Fraction(0)
    for e, c in f.terms.items():
        v = c
        for pi, k in zip(pt, e):
            if k:
                v *= pi ** k
        total += v
    return total


def partial_derivative(f: MultiPoly, axis) -> MultiPoly:
    if isinstance(axis, str):
        if axis not in f.variables:
            raise DimensionMismatch(f"unknown axis {axis!r}")
        i = f.variables.index(axis)
    else:
        i = int(axis)
        if not 0 <= i < f.nvars:
            raise DimensionMismatch(f"unknown axis index {axis}")
    out = {}
    for e, c in f.terms.items():
        if e[i]:
            ne = list(e)
            ne[i] -= 1
            out[tuple(ne)] = c * e[i]
    return MultiPoly(out, f.variables)


def osculation_forms(f: MultiPoly, p: Sequence, count: int = 4,
                     variables: Sequence[str] = V4) -> list[MultiPoly]:
    """Directional derivatives F_1..F_count of f at p as forms in the direction v.

    F_i(v) is the i-th derivative of t -> f(p + t v) at t = 0, i.e. i! times
    the degree-i part of the Taylor shift of f to p.
    """
    if f.nvars != 4 or len(p) != 4:
        raise DimensionMismatch("osculation forms need a 4-variate f and a point in Q^4")
    g = f.shift(p)
    forms = []
    for i in range(1, count + 1):
        part = g.homogeneous_part(i) * math.factorial(i)
        forms.append(MultiPoly(part.terms, variables))
    return forms


def restrict_to_line(f: MultiPoly, base: Sequence, direction: Sequence):
    """Coefficients of t -> f(base + t*direction) as a UniPoly."""
    from .unipoly import UniPoly

    if len(base) != f.nvars or len(direction) != f.nvars:
        raise DimensionMismatch("line dimension does not match polynomial")
    base = [Q(c) for c in base]
    direction = [Q(c) for c in direction]
    if not any(direction):
        from ..errors import ZeroDirectionError
        raise ZeroDirectionError("direction vector is zero")
    lin = [UniPoly([b, d]) for b, d in zip(base, direction)]
    cache: list[dict[int, UniPoly]] = [{0: UniPoly([1])} for _ in lin]

    def pw(i, k):
        c = cache[i]
        if k not in c:
            c[k] = pw(i, k - 1) * lin[i]
        return c[k]

    acc = [Fraction(0)] * (max(f.degree(), 0) + 1)
    for e, c in f.terms.items():
        term = UniPoly([c])
        for i, k in enumerate(e):
            if k:
                term = term * pw(i, k)
        for j, v in enumerate(term.coeffs):
            acc[j] += v
    return UniPoly(acc)


# -- text format -------------------------------------------------------------


def _fmt_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(f: MultiPoly) -> str:
    """Render as ``c * x^a y^b ...`` terms joined by `` + ``; zero is ``0``."""
    if f.is_zero():
        return "0"
    parts = []
    for e, c in f.sorted_terms():
        mono = " ".join(f"{v}^{k}" for v, k in zip(f.variables, e) if k)
        parts.append(f"{_fmt_rational(c)} * {mono}" if mono else _fmt_rational(c))
    return " + ".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_]\w*)|(\^)|(\*)|([+-])|([()]))")


def parse_poly(text: str, variables: Sequence[str] = XYZW) -> MultiPoly:
    """Parse sums of monomials such as ``"2/3 * x^2 y^1 - y*z + 4"``.

    Factors inside a term may be separated by ``*`` or whitespace; a variable
    may carry ``^k``.  Parentheses are not supported.
    """
    variables = tuple(variables)
    pos, n = 0, len(text)
    tokens = []
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial near {text[pos:pos + 10]!r}")
        num, name, caret, star, sign, paren = m.groups()
        if paren:
            raise ValueError("parentheses are not supported in the polynomial text format")
        tokens.append(("num", num) if num else ("var", name) if name else
                      ("^", None) if caret else ("*", None) if star else ("sign", sign))
        pos = m.end()

    terms: dict[tuple[int, ...], Fraction] = {}
    i = 0
    nv = len(variables)
    expect_term = True
    while i < len(tokens):
        sign = 1
        while i < len(tokens) and tokens[i][0] == "sign":
            if tokens[i][1] == "-":
                sign = -sign
            i += 1
        coef = Fraction(sign)
        exp = [0] * nv
        got = False
        while i < len(tokens) and tokens[i][0] in ("num", "var", "*"):
            kind, val = tokens[i]
            i += 1
            if kind == "*":
                continue
            got = True
            if kind == "num":
                coef *= Fraction(val)
            else:
                if val not in variables:
                    raise ValueError(f"unknown variable {val!r}")
                k = 1
                if i < len(tokens) and tokens[i][0] == "^":
                    if i + 1 >= len(tokens) or tokens[i + 1][0] != "num" or "/" in tokens[i + 1][1]:
                        raise ValueError("exponent must be a nonnegative integer")
                    k = int(tokens[i + 1][1])
                    i += 2
                exp[variables.index(val)] += k
        if not got:
            raise ValueError("empty term in polynomial text")
        e = tuple(exp)
        terms[e] = terms.get(e, 0) + coef
        expect_term = False
    if expect_term:
        raise ValueError("empty polynomial text")
    return MultiPoly(terms, variables)


def monomials(nvars: int, degree: int, exact: bool = True) -> list[tuple[int, ...]]:
    """Exponent tuples of total degree ``degree`` (or ``<= degree``), grlex descending."""
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for k in range(remaining, -1, -1):
            rec(prefix + (k,), remaining - k, slots - 1)

    degrees = [degree] if exact else range(degree, -1, -1)
    for d in degrees:
        rec((), d, nvars)
    return out
