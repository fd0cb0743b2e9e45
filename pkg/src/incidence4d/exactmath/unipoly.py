"""Dense univariate polynomials over Q: gcd, Sturm sequences, complex roots."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..errors import IdenticallyZeroError, RootFindingError
from .poly import Q


class UniPoly:
    """Coefficients stored lowest degree first, trailing zeros trimmed."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        cs = [Q(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def from_roots(cls, roots) -> "UniPoly":
        p = cls([1])
        for r in roots:
            p = p * cls([-Q(r), 1])
        return p

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, t) -> Fraction:
        t = Q(t)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({[str(c) for c in self.coeffs]})"

    def __add__(self, other):
        other = other if isinstance(other, UniPoly) else UniPoly([other])
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return UniPoly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        other = other if isinstance(other, UniPoly) else UniPoly([other])
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            c = Q(other)
            return UniPoly([c * x for x in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __divmod__(self, other: "UniPoly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree()
        lc = other.lc
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] / lc
            if c:
                quot[k - dq] = c
                for j, b in enumerate(other.coeffs):
                    rem[k - dq + j] -= c * b
        return UniPoly(quot), UniPoly(rem[:dq] if dq > 0 else [])

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def derivative(self) -> "UniPoly":
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return self * (1 / self.lc)

    def primitive(self) -> "UniPoly":
        """Positive rational multiple with coprime integer coefficients (keeps signs stable)."""
        if self.is_zero():
            return self
        from math import gcd, lcm
        den = 1
        for c in self.coeffs:
            den = lcm(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = gcd(g, v)
        return UniPoly([Fraction(v, g) for v in ints])

    def sign_at(self, t) -> int:
        v = self(t)
        return (v > 0) - (v < 0)

    def sign_at_infinity(self, positive: bool = True) -> int:
        if self.is_zero():
            return 0
        s = 1 if self.lc > 0 else -1
        if not positive and self.degree() % 2:
            s = -s
        return s


_GCD_PRIMES = (2 ** 61 - 1, 2 ** 31 - 1)


def _integer_coeffs(p: UniPoly) -> list[int]:
    den = 1
    for c in p.coeffs:
        den = math.lcm(den, c.denominator)
    return [int(c * den) for c in p.coeffs]


def _gcd_degree_mod(a: list[int], b: list[int], prime: int) -> int:
    """Degree of gcd(a, b) over GF(prime); coefficients lowest degree first."""
    def trim(v):
        v = [c % prime for c in v]
        while v and not v[-1]:
            v.pop()
        return v

    a, b = trim(a), trim(b)
    while b:
        inv = pow(b[-1], -1, prime)
        while len(a) >= len(b):
            f = a[-1] * inv % prime
            shift = len(a) - len(b)
            for i, c in enumerate(b):
                a[shift + i] = (a[shift + i] - f * c) % prime
            a = trim(a)
        a, b = b, a
    return len(a) - 1


def coprime_certificate(a: UniPoly, b: UniPoly) -> bool:
    """True only if gcd(a, b) = 1 is certified by a gcd modulo a prime.

    A prime dividing neither leading coefficient keeps the degree of any
    common factor, so a constant gcd mod p proves a constant gcd over Q.
    False means not certified, not that a common factor exists.
    """
    if a.degree() <= 0 or b.degree() <= 0:
        return False
    ia, ib = _integer_coeffs(a), _integer_coeffs(b)
    for prime in _GCD_PRIMES:
        if ia[-1] % prime and ib[-1] % prime:
            return _gcd_degree_mod(ia, ib, prime) == 0
    return False


def uni_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd by the Euclidean algorithm over Q."""
    if a.is_zero() and b.is_zero():
        raise IdenticallyZeroError("gcd of two zero polynomials is undefined")
    if coprime_certificate(a, b):
        return UniPoly([1])
    while not b.is_zero():
        a, b = b, (a % b).primitive()
    return a.monic()


def gcd_many(polys: Sequence[UniPoly]) -> UniPoly:
    """gcd of a list; the zero polynomial when every entry is zero."""
    nonzero = [p for p in polys if not p.is_zero()]
    if not nonzero:
        return UniPoly()
    g = nonzero[0].monic()
    for p in nonzero[1:]:
        g = uni_gcd(g, p)
        if g.degree() == 0:
            break
    return g


def square_free_part(p: UniPoly) -> UniPoly:
    if p.is_zero():
        raise IdenticallyZeroError("square-free part of the zero polynomial")
    if p.degree() <= 0:
        return p.monic()
    g = uni_gcd(p, p.derivative())
    return (p // g).monic()


def sturm_sequence(p: UniPoly) -> list[UniPoly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        r = seq[-2] % seq[-1]
        # positive rescaling keeps the sign pattern while taming coefficients
        seq.append(-(r.primitive()))
    return seq[:-1]


def _variations(signs) -> int:
    nz = [s for s in signs if s]
    return sum(1 for a, b in zip(nz, nz[1:]) if a != b)


def sturm_distinct_real_roots(p: UniPoly, interval: tuple | None = None) -> int:
    """Number of distinct real roots of p, optionally in the open interval (lo, hi).

    Either endpoint of ``interval`` may be ``None`` for an unbounded side.
    Raises IdenticallyZeroError for the zero polynomial.
    """
    if p.is_zero():
        raise IdenticallyZeroError("polynomial is identically zero")
    if p.degree() == 0:
        return 0
    q = square_free_part(p)
    seq = sturm_sequence(q)
    lo, hi = interval if interval is not None else (None, None)
    if lo is not None and hi is not None and Q(lo) >= Q(hi):
        return 0
    v_lo = (_variations([s.sign_at_infinity(False) for s in seq]) if lo is None
            else _variations([s.sign_at(lo) for s in seq]))
    if hi is None:
        v_hi = _variations([s.sign_at_infinity(True) for s in seq])
        return v_lo - v_hi
    v_hi = _variations([s.sign_at(hi) for s in seq])
    # V(lo) - V(hi) counts roots in (lo, hi]; drop hi itself for an open interval
    return v_lo - v_hi - (1 if q(hi) == 0 else 0)


def complex_roots(p: UniPoly, tol: float = 1e-10, polish: bool = True) -> list[complex]:
    """All complex roots via companion-matrix eigenvalues, Newton polished.

    The residual |p(r)| of every root must be below ``tol`` times the
    coefficient scale sum |c_i| |r|^i; otherwise RootFindingError is raised
    with the worst residual attached.
    """
    if p.degree() < 1:
        raise ValueError("complex_roots needs degree >= 1")
    c = np.array([float(x) for x in reversed(p.coeffs)], dtype=complex)
    c = c / c[0]
    roots = np.roots(c) if len(c) > 1 else np.array([], dtype=complex)
    d = np.polyder(c)
    out = []
    worst = 0.0
    for r in roots:
        if polish:
            for _ in range(8):
                dv = np.polyval(d, r)
                if dv == 0:
                    break
                step = np.polyval(c, r) / dv
                r = r - step
                if abs(step) <= 1e-16 * max(1.0, abs(r)):
                    break
        scale = float(np.sum(np.abs(c) * np.abs(r) ** np.arange(len(c) - 1, -1, -1)))
        res = abs(np.polyval(c, r)) / max(scale, 1e-300)
        worst = max(worst, res)
        out.append(complex(r))
    if worst > tol:
        raise RootFindingError(f"root residual {worst:.3g} exceeds tolerance {tol:g}", worst)
    return out
