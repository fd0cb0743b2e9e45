"""Exact affine geometry in Q^4: canonical lines, flats, quadrics and incidences."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import ConfigError, DimensionMismatch, ZeroDirectionError
from .exactmath.linalg import primitive_integer_vector, rref
from .exactmath.poly import XYZW, MultiPoly, Q, monomials

Point4 = tuple  # four Fractions

FULL_SPACE = "dim 4"


def point(*coords) -> Point4:
    if len(coords) == 1 and not isinstance(coords[0], (int, Fraction, str)):
        coords = tuple(coords[0])
    if len(coords) != 4:
        raise DimensionMismatch(f"expected 4 coordinates, got {len(coords)}")
    return tuple(Q(c) for c in coords)


@dataclass(frozen=True, order=True)
class Line4:
    """Affine line in canonical form; equal iff the same point set.

    ``dir`` is a primitive integer vector with positive first nonzero entry and
    ``base`` is the point of the line whose coordinate at that pivot is zero.
    """
    base: tuple
    dir: tuple

    @property
    def pivot(self) -> int:
        return next(i for i, d in enumerate(self.dir) if d)

    def at(self, t) -> Point4:
        t = Q(t)
        return tuple(b + t * d for b, d in zip(self.base, self.dir))

    def contains(self, p: Sequence) -> bool:
        i = self.pivot
        t = (Q(p[i]) - self.base[i]) / self.dir[i]
        return all(Q(pj) == bj + t * dj for pj, bj, dj in zip(p, self.base, self.dir))

    def parameter_of(self, p: Sequence) -> Fraction:
        i = self.pivot
        return (Q(p[i]) - self.base[i]) / self.dir[i]


def canonicalize_line(base: Sequence, direction: Sequence) -> Line4:
    if len(base) != 4 or len(direction) != 4:
        raise DimensionMismatch("lines live in Q^4")
    direction = [Q(d) for d in direction]
    if not any(direction):
        raise ZeroDirectionError("line direction is zero")
    d = primitive_integer_vector(direction)
    i = next(k for k, v in enumerate(d) if v)
    b = [Q(c) for c in base]
    t = b[i] / d[i]
    return Line4(tuple(bj - t * dj for bj, dj in zip(b, d)), d)


def line_through(p: Sequence, q: Sequence) -> Line4:
    p, q = point(p), point(q)
    return canonicalize_line(p, [b - a for a, b in zip(p, q)])


def axis_line(index: int, offset: Sequence = (0, 0, 0, 0)) -> Line4:
    d = [0, 0, 0, 0]
    d[index] = 1
    return canonicalize_line(offset, d)


# -- flats ---------------------------------------------------------------------


@dataclass(frozen=True)
class AffineFlat:
    """basepoint + span(directions); directions in RREF, basepoint zero at pivots."""
    dim: int
    basepoint: tuple
    directions: tuple

    @classmethod
    def from_vectors(cls, basepoint: Sequence, vectors: Iterable[Sequence]) -> "AffineFlat":
        rows, piv = rref([[Q(c) for c in v] for v in vectors])
        b = [Q(c) for c in basepoint]
        for r, pc in zip(rows, piv):
            if b[pc]:
                f = b[pc]
                b = [bi - f * ri for bi, ri in zip(b, r)]
        return cls(len(rows), tuple(b), tuple(tuple(r) for r in rows))

    def _residual(self, v: Sequence) -> list[Fraction]:
        v = [Q(c) for c in v]
        for row in self.directions:
            pc = next(i for i, x in enumerate(row) if x)
            if v[pc]:
                f = v[pc]
                v = [a - f * b for a, b in zip(v, row)]
        return v

    def contains_point(self, p: Sequence) -> bool:
        return not any(self._residual([Q(a) - b for a, b in zip(p, self.basepoint)]))

    def contains_vector(self, v: Sequence) -> bool:
        return not any(self._residual(v))

    def normal_form(self):
        """For a hyperplane: primitive integer normal N and offset c with N.x = c."""
        if self.dim != 3:
            raise ValueError("normal form only defined for hyperplanes")
        N = cross4(*self.directions)
        N = primitive_integer_vector(N)
        return N, sum(n * b for n, b in zip(N, self.basepoint))


def flat_contains_line(F: AffineFlat, line: Line4) -> bool:
    return F.contains_point(line.base) and F.contains_vector(line.dir)


def affine_span(lines: Sequence[Line4]):
    """Smallest flat containing every line, or FULL_SPACE."""
    if not lines:
        raise ValueError("affine span of an empty set")
    b0 = lines[0].base
    vecs = [l.dir for l in lines] + [[a - b for a, b in zip(l.base, b0)] for l in lines[1:]]
    F = AffineFlat.from_vectors(b0, vecs)
    return FULL_SPACE if F.dim == 4 else F


def cross4(a, b, c) -> tuple:
    """Vector orthogonal to a, b, c in Q^4 (zero iff they are dependent)."""
    M = [a, b, c]
    out = []
    for skip in range(4):
        cols = [j for j in range(4) if j != skip]
        m = [[M[r][j] for j in cols] for r in range(3)]
        det = (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
               - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
               + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
        out.append(det if skip % 2 == 0 else -det)
    return tuple(out)


# -- quadrics --------------------------------------------------------------------

QUADRIC_MONOMIALS = tuple(monomials(4, 2, exact=False))  # x^2, xy, ..., w^2, x, y, z, w, 1


@dataclass(frozen=True)
class Quadric4:
    coeffs: tuple

    @classmethod
    def from_coeffs(cls, coeffs: Sequence) -> "Quadric4":
        cs = [Q(c) for c in coeffs]
        if len(cs) != 15:
            raise DimensionMismatch("a quadric has 15 coefficients")
        if not any(cs[:10]):
            raise ValueError("degree-2 part vanishes; not a quadric")
        lead = next(c for c in cs if c)
        return cls(tuple(c / lead for c in cs))

    @classmethod
    def from_poly(cls, f: MultiPoly) -> "Quadric4":
        if f.degree() > 2:
            raise ValueError("polynomial degree exceeds 2")
        return cls.from_coeffs([f.coefficient(m) for m in QUADRIC_MONOMIALS])

    def poly(self) -> MultiPoly:
        return MultiPoly(dict(zip(QUADRIC_MONOMIALS, self.coeffs)), XYZW)


def quadric_line_conditions(line: Line4) -> list[list[Fraction]]:
    """Three linear conditions on the 15 quadric coefficients (t^0, t^1, t^2 of Q(base+t dir))."""
    b, d = line.base, [Fraction(x) for x in line.dir]
    rows = [[Fraction(0)] * 15 for _ in range(3)]
    for k, e in enumerate(QUADRIC_MONOMIALS):
        # product of (b_i + t d_i)^{e_i}
        poly = [Fraction(1)]
        for i, ei in enumerate(e):
            for _ in range(ei):
                nxt = [Fraction(0)] * (len(poly) + 1)
                for j, c in enumerate(poly):
                    nxt[j] += c * b[i]
                    nxt[j + 1] += c * d[i]
                poly = nxt
        for j, c in enumerate(poly):
            rows[j][k] += c
    return rows


def quadric_contains_line(Qd: Quadric4, line: Line4) -> bool:
    return all(sum(r * c for r, c in zip(row, Qd.coeffs)) == 0
               for row in quadric_line_conditions(line))


# -- configurations -----------------------------------------------------------------


@dataclass
class Config:
    name: str
    points: list
    lines: list
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.points = [point(p) for p in self.points]
        if len(set(self.points)) != len(self.points):
            raise ConfigError("duplicate points in configuration")
        if len(set(self.lines)) != len(self.lines):
            raise ConfigError("duplicate lines in configuration")

    @property
    def m(self) -> int:
        return len(self.points)

    @property
    def n(self) -> int:
        return len(self.lines)


class IncidenceCounts(NamedTuple):
    total: int
    per_line: list
    per_point: list


def _int_rows(rows: Sequence[Sequence[Fraction]]):
    """Scale rational rows by one common denominator; int64 when it is safe."""
    den = 1
    for r in rows:
        for x in r:
            if x.denominator != 1:
                den = lcm(den, x.denominator)
    ints = [[int(x * den) for x in r] for r in rows]
    return np.array(ints, dtype=object).reshape(len(rows), 4), den


def _narrow(A, factor: int):
    """Use int64 when every entry times ``factor`` stays far from overflow."""
    big = max((abs(int(v)) for v in A.flat), default=0)
    if big * max(factor, 1) < 2 ** 60:
        return A.astype(np.int64)
    return A


def incidence_count(cfg: Config, method: str = "naive") -> IncidenceCounts:
    """I(P, L) with per-line and per-point tallies.

    ``naive`` tests every (point, line) pair (vectorized over points);
    ``grouped`` buckets lines by direction and looks up each point's canonical
    line of that direction in a hash table.  Both are exact.
    """
    m, n = cfg.m, cfg.n
    per_line = [0] * n
    per_point = [0] * m
    if m == 0 or n == 0:
        return IncidenceCounts(0, per_line, per_point)
    P, den = _int_rows(cfg.points)
    if method == "naive":
        for li, l in enumerate(cfg.lines):
            i = l.pivot
            bden = 1
            for x in l.base:
                bden = lcm(bden, x.denominator)
            bnum = [int(x * bden) for x in l.base]
            # (p - b) parallel to d, scaled by den*bden
            maxd = max(abs(v) for v in l.dir)
            Pl = _narrow(P, 4 * bden * maxd + 4 * max(abs(v) for v in bnum) * den * maxd)
            diff = Pl * bden - np.array([v * den for v in bnum], dtype=Pl.dtype)
            ok = np.ones(m, dtype=bool)
            for j in range(4):
                if j != i:
                    ok &= (diff[:, j] * l.dir[i] - diff[:, i] * l.dir[j]) == 0
            hits = np.nonzero(ok)[0]
            per_line[li] = len(hits)
            for h in hits:
                per_point[h] += 1
    elif method == "grouped":
        by_dir: dict[tuple, dict[tuple, int]] = defaultdict(dict)
        for li, l in enumerate(cfg.lines):
            i = l.pivot
            key = [x * den * l.dir[i] for x in l.base]
            if all(k.denominator == 1 for k in key):
                by_dir[l.dir][tuple(int(k) for k in key)] = li
        for d, table in by_dir.items():
            i = next(k for k, v in enumerate(d) if v)
            Pd = _narrow(P, 4 * max(abs(v) for v in d))
            K = Pd * d[i] - np.outer(Pd[:, i], np.array(d, dtype=Pd.dtype))
            for pi, row in enumerate(K.tolist()):
                li = table.get(tuple(row))
                if li is not None:
                    per_line[li] += 1
                    per_point[pi] += 1
    else:
        raise ValueError(f"unknown method {method!r}")
    return IncidenceCounts(sum(per_line), per_line, per_point)


def incidence_pairs(points: Sequence[Point4], lines: Sequence[Line4]) -> list[tuple[int, int]]:
    """All (point index, line index) incidences, sorted, via direction-bucketed hashing."""
    if not points or not lines:
        return []
    P, den = _int_rows(points)
    by_dir: dict[tuple, dict[tuple, int]] = defaultdict(dict)
    for li, l in enumerate(lines):
        i = l.pivot
        key = [x * den * l.dir[i] for x in l.base]
        if all(k.denominator == 1 for k in key):
            by_dir[l.dir][tuple(int(k) for k in key)] = li
    out = []
    for d, table in by_dir.items():
        i = next(k for k, v in enumerate(d) if v)
        Pd = _narrow(P, 4 * max(abs(v) for v in d))
        K = Pd * d[i] - np.outer(Pd[:, i], np.array(d, dtype=Pd.dtype))
        for pi, row in enumerate(K.tolist()):
            li = table.get(tuple(row))
            if li is not None:
                out.append((pi, li))
    return sorted(out)


class Intersection(NamedTuple):
    kind: str  # "point", "identical", "parallel" or "skew"
    point: Point4 | None = None


def intersect_lines(a: Line4, b: Line4) -> Intersection:
    if a == b:
        return Intersection("identical")
    if a.dir == b.dir:
        return Intersection("parallel")
    # a.base + s a.dir = b.base + t b.dir
    rhs = [bb - ab for ab, bb in zip(a.base, b.base)]
    rows = [[Fraction(a.dir[j]), Fraction(-b.dir[j]), rhs[j]] for j in range(4)]
    R, piv = rref(rows)
    if 2 in piv:
        return Intersection("skew")
    s = R[0][2]
    return Intersection("point", a.at(s))


def coplanar(a: Line4, b: Line4) -> bool:
    if a == b:
        return True
    off = [y - x for x, y in zip(a.base, b.base)]
    return not any(cross4(a.dir, b.dir, off))


def rich_points(lines: Sequence[Line4], k: int = 2):
    """Points on at least k lines: (count, {point: number of lines through it})."""
    if k < 2:
        raise ValueError("rich points need k >= 2")
    through: dict[Point4, set] = defaultdict(set)
    for (i, a), (j, b) in combinations(enumerate(lines), 2):
        if a.dir == b.dir:
            continue
        res = intersect_lines(a, b)
        if res.kind == "point":
            through[res.point].update((i, j))
    rich = {p: len(s) for p, s in through.items() if len(s) >= k}
    return len(rich), rich
