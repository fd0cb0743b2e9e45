"""Pointwise algebraic criteria on a hypersurface Z(f) in R^4.

Singular points, osculating directions (F_1 = F_2 = F_3 = 0), flecnode and
u-resultant values, flatness polynomials, flat lines and tangent constancy.
Exact arithmetic throughout, except the complex solver behind
``osculating_directions``, which works in complex128 and reports residuals.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import (EliminationError, NotOnVarietyError, RootFindingError, ZeroFormsError)
from .exactmath.linalg import fraction_free_det, nullspace, solve
from .exactmath.poly import V4, MultiPoly, Q, monomials, osculation_forms, restrict_to_line
from .exactmath.resultant import linear_change, macaulay_resultant, random_unimodular
from .exactmath.unipoly import UniPoly, complex_roots, gcd_many, sturm_distinct_real_roots
from .geom import Line4

SINGULAR_LINE = "singular line"
# slice coordinate -> the three free coordinates, in the order used for e_1, e_2, e_3
SLICES = ((0, (1, 2, 3)), (1, (0, 2, 3)), (2, (0, 1, 3)))


def _on_variety(f: MultiPoly, p: Sequence) -> list[Fraction]:
    p = [Q(c) for c in p]
    if f(p) != 0:
        raise NotOnVarietyError(f"f does not vanish at {tuple(str(c) for c in p)}")
    return p


def _line_on_variety(f: MultiPoly, line: Line4):
    if not restrict_to_line(f, line.base, line.dir).is_zero():
        raise NotOnVarietyError("line is not contained in Z(f)")


def is_singular(f: MultiPoly, p: Sequence) -> bool:
    p = _on_variety(f, p)
    return all(g(p) == 0 for g in f.gradient())


def _restricted_gradient(f: MultiPoly, line: Line4) -> list[UniPoly]:
    return [restrict_to_line(g, line.base, line.dir) for g in f.gradient()]


def singular_count_on_line(f: MultiPoly, line: Line4):
    """Distinct real singular points on a contained line, or SINGULAR_LINE."""
    _line_on_variety(f, line)
    g = gcd_many(_restricted_gradient(f, line))
    if g.is_zero():
        return SINGULAR_LINE
    return sturm_distinct_real_roots(g)


# -- numeric helpers -----------------------------------------------------------------


class _NumPoly:
    """A MultiPoly compiled for fast complex evaluation."""

    def __init__(self, f: MultiPoly):
        items = list(f.terms.items())
        self.E = np.array([e for e, _ in items], dtype=int).reshape(len(items), f.nvars)
        self.c = np.array([float(c) for _, c in items], dtype=complex)
        self.norm = float(np.sum(np.abs(self.c))) if items else 0.0

    def __call__(self, v) -> complex:
        if not len(self.c):
            return 0j
        return complex(self.c @ np.prod(np.asarray(v, dtype=complex)[None, :] ** self.E, axis=1))


def _normalize_direction(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return v / v[int(np.argmax(np.abs(v)))]


def _relative_residual(polys: Sequence[_NumPoly], v) -> float:
    v = _normalize_direction(v)
    return max((abs(P(v)) / P.norm for P in polys if P.norm), default=0.0)


def _newton_polish(forms: Sequence[MultiPoly], v, steps: int = 30) -> np.ndarray:
    """Newton on forms(v) = 0 in the affine chart where the largest coordinate is 1."""
    F = [_NumPoly(g) for g in forms]
    J = [[_NumPoly(g.diff(i)) for i in range(4)] for g in forms]
    v = _normalize_direction(v)
    chart = int(np.argmax(np.abs(v)))
    free = [i for i in range(4) if i != chart]
    for _ in range(steps):
        r = np.array([P(v) for P in F])
        if np.max(np.abs(r)) < 1e-300:
            break
        Jm = np.array([[row[i](v) for i in free] for row in J])
        try:
            step = np.linalg.lstsq(Jm, -r, rcond=None)[0]
        except np.linalg.LinAlgError:
            break
        v = v.copy()
        v[free] += step
        if np.max(np.abs(step)) < 1e-17:
            break
    return _normalize_direction(v)


# -- osculating directions ---------------------------------------------------------


@dataclass
class OsculationReport:
    directions: list = field(default_factory=list)
    infinite_flag: bool = False
    contained_directions: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    contained_residuals: list = field(default_factory=list)
    seed: int = 0
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        def enc(v):
            return [[z.real, z.imag] for z in v]
        return {"infinite": self.infinite_flag,
                "directions": [enc(v) for v in self.directions],
                "contained": [enc(v) for v in self.contained_directions],
                "residuals": list(self.residuals),
                "contained_residuals": list(self.contained_residuals),
                "seed": self.seed, "notes": list(self.notes)}


def _eliminate_linear(F1: MultiPoly, others: Sequence[MultiPoly]):
    """Solve F1 = 0 for its last variable with a nonzero coefficient.

    Returns (k, images, reduced) where images[i] expresses v_i through the
    three remaining variables and ``reduced`` are the other forms rewritten
    in those three variables.
    """
    coef = [F1.coefficient(tuple(int(i == j) for j in range(4))) for i in range(4)]
    k = max(i for i in range(4) if coef[i])
    keep = [i for i in range(4) if i != k]
    names = tuple(V4[i] for i in keep)
    images = []
    for i in range(4):
        if i == k:
            images.append(MultiPoly.linear_form([-coef[j] / coef[k] for j in keep], 0, names))
        else:
            images.append(MultiPoly.var(V4[i], names))
    return k, images, [g.substitute(images) for g in others]


def _sylvester(p: Sequence, q: Sequence) -> list[list[Fraction]]:
    """Sylvester matrix of coefficient lists given highest degree first."""
    dp, dq = len(p) - 1, len(q) - 1
    size = dp + dq
    rows = []
    for i in range(dq):
        rows.append([Fraction(0)] * i + list(p) + [Fraction(0)] * (size - dp - 1 - i))
    for i in range(dp):
        rows.append([Fraction(0)] * i + list(q) + [Fraction(0)] * (size - dq - 1 - i))
    return rows


def _coeffs_in(g: MultiPoly, var: int, a, c, deg: int) -> list[Fraction]:
    """Coefficients of g(a, t, c) in t (variable slot ``var``), highest first, padded to deg."""
    base = [Q(0)] * 3
    others = [i for i in range(3) if i != var]
    base[others[0]], base[others[1]] = Q(a), Q(c)
    d = [0, 0, 0]
    d[var] = 1
    u = restrict_to_line(g, base, d).coeffs
    u = list(u) + [Fraction(0)] * (deg + 1 - len(u))
    return list(reversed(u[:deg + 1]))


def _interpolate(xs, ys) -> UniPoly:
    """Exact Lagrange interpolation."""
    out = UniPoly()
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if not yi:
            continue
        term = UniPoly([yi])
        for j, xj in enumerate(xs):
            if j != i:
                term = term * UniPoly([-Q(xj) / (xi - xj), 1 / Q(xi - xj)])
        out = out + term
    return out


def _binary_resultant(G2: MultiPoly, G3: MultiPoly) -> UniPoly:
    """Res_{t}(G2(a, t, 1), G3(a, t, 1)) as a polynomial in a (degree <= 6)."""
    xs = [Fraction(i) for i in range(-3, 5)]
    ys = [fraction_free_det(_sylvester(_coeffs_in(G2, 1, a, 1, 2), _coeffs_in(G3, 1, a, 1, 3)))
          for a in xs]
    return _interpolate(xs, ys)


def _univariate(g: MultiPoly, var_slot: int, point: Sequence) -> UniPoly:
    d = [0] * g.nvars
    d[var_slot] = 1
    return restrict_to_line(g, point, d)


def _solve_finite(G2: MultiPoly, G3: MultiPoly):
    """Projective common zeros of a ternary quadric and cubic in general position.

    Requires the t^2 and t^3 coefficients to be nonzero constants (so no
    solution escapes to t = infinity).  Returns (resultant, list of complex
    3-vectors) or (zero resultant, None) if the forms share a component.
    """
    R = _binary_resultant(G2, G3)
    if R.is_zero():
        return R, None
    sols = []
    roots = [(complex(r), 1.0) for r in complex_roots(R, tol=1e-6)] if R.degree() >= 1 else []
    if R.degree() < 6:
        # missing degree means a root of the homogenized resultant at c = 0
        roots.append((1.0 + 0j, 0.0))
    for a, c in roots:
        q2 = [complex(x) for x in _num_coeffs(G2, a, c, 2)]
        ts = np.roots(q2) if any(q2[:-1]) else np.array([])
        if not len(ts):
            continue
        g3 = _NumPoly(G3)
        t = min(ts, key=lambda t: abs(g3(np.array([a, t, c]))))
        sols.append(np.array([a, t, c], dtype=complex))
    return R, sols


def _num_coeffs(g: MultiPoly, a: complex, c: complex, deg: int):
    out = [0j] * (deg + 1)
    for e, coef in g.terms.items():
        out[deg - e[1]] += float(coef) * a ** e[0] * c ** e[2]
    return out


def _sample_on_slice(forms: Sequence[MultiPoly], rng: random.Random) -> list[np.ndarray]:
    """Points of the positive-dimensional solution set on one random hyperplane of v-space."""
    u = [rng.randint(-9, 9) or 1 for _ in range(4)]
    L = MultiPoly.linear_form(u, 0, V4)
    live = [g for g in forms if not g.is_zero()]
    lin = [g for g in live if g.degree() == 1]
    rest = [g for g in live if g.degree() > 1]
    eqs = [L] + lin
    # exact elimination of all linear equations
    names = list(V4)
    images = [MultiPoly.var(n, V4) for n in V4]
    for E in eqs:
        E = E.substitute(images)
        if E.is_zero():
            continue
        coef = {i: E.coefficient(tuple(int(i == j) for j in range(4))) for i in range(4)}
        k = max(i for i in range(4) if coef[i])
        sub = MultiPoly.linear_form([-coef[j] / coef[k] if j != k else 0 for j in range(4)], 0, V4)
        images = [im.substitute([sub if j == k else MultiPoly.var(V4[j], V4) for j in range(4)])
                  for im in images]
        names.remove(V4[k])
    free = [V4.index(n) for n in names]
    reduced = [g.substitute(images) for g in rest]
    reduced = [g for g in reduced if not g.is_zero()]
    if len(free) != 2:
        return []
    # binary forms in the two free variables: dehomogenize the first one to 1
    one = [0] * 4
    one[free[0]] = 1
    unis = [_univariate(g, free[1], one) for g in reduced]
    g = gcd_many(unis) if unis else UniPoly([0, 1])
    if g.is_zero() or g.degree() < 1:
        return []
    out = []
    for t in complex_roots(g, tol=1e-6):
        v = np.zeros(4, dtype=complex)
        v[free[0]], v[free[1]] = 1.0, t
        full = np.array([_NumPoly(im)(v) for im in images])
        out.append(_normalize_direction(full))
    return out


def _dedupe(vs: Sequence[np.ndarray], tol: float = 1e-6) -> list[np.ndarray]:
    out = []
    for v in vs:
        v = _normalize_direction(v)
        if all(np.max(np.abs(v - w)) > tol for w in out):
            out.append(v)
    return out


def _solve_system(F1: MultiPoly, F2: MultiPoly, F3: MultiPoly, rng: random.Random):
    """Finite solution set of F1 = F2 = F3 = 0, or None when it is infinite.

    Decided exactly: infinite iff F1 vanishes, a reduced form vanishes, or
    the resultant eliminating t is identically zero.  Raises EliminationError
    when the random frame is degenerate.
    """
    if F1.is_zero():
        return None
    k, images, (G2, G3) = _eliminate_linear(F1, [F2, F3])
    if G2.is_zero() or G3.is_zero():
        return None
    A = random_unimodular(3, rng)
    H2, H3 = linear_change(G2, A), linear_change(G3, A)
    if H2.coefficient((0, 2, 0)) == 0 or H3.coefficient((0, 3, 0)) == 0:
        raise EliminationError("leading coefficient vanished in the random frame")
    R, sols = _solve_finite(H2, H3)
    if sols is None:
        return None
    keep = [i for i in range(4) if i != k]
    An = np.array([[float(x) for x in row] for row in A])
    out = []
    for s in sols:
        w = An @ s
        v = np.zeros(4, dtype=complex)
        v[keep] = w
        v[k] = _NumPoly(images[k])(w)
        out.append(v)
    return out


def osculating_directions(f: MultiPoly, p: Sequence, tol: float = 1e-8, seed: int = 0,
                          retries: int = 6) -> OsculationReport:
    """Directions v with F_1(v) = F_2(v) = F_3(v) = 0 at p.

    The linear form F_1 is eliminated exactly, then a resultant in one more
    variable yields a univariate of degree <= 6 whose complex roots are
    back-substituted and Newton polished on the original system.  Whether
    the solution set is infinite is decided exactly from that elimination.
    A direction is marked contained when every Taylor coefficient of
    t -> f(p + t v) is below ``tol`` relative to its coefficient norm.
    """
    p = _on_variety(f, p)
    if f.degree() < 1:
        raise ValueError("need deg f >= 1")
    deg = f.degree()
    forms = osculation_forms(f, p, count=max(deg, 3))
    F1, F2, F3 = forms[:3]
    rng = random.Random(seed)
    report = OsculationReport(seed=seed)
    sols = None
    for attempt in range(retries + 1):
        try:
            sols = _solve_system(F1, F2, F3, rng)
            break
        except (EliminationError, RootFindingError) as exc:
            report.notes.append(f"attempt {attempt}: {exc}")
    else:
        raise EliminationError(f"elimination failed in {retries + 1} random frames")
    if sols is None:
        report.infinite_flag = True
        sols = _sample_on_slice([F1, F2, F3], rng)
    sols = _dedupe([_newton_polish([F1, F2, F3], v) for v in sols])
    num3 = [_NumPoly(g) for g in (F1, F2, F3)]
    numall = [_NumPoly(g) for g in forms[:deg]]
    for v in sols:
        report.directions.append(tuple(complex(z) for z in v))
        report.residuals.append(_relative_residual(num3, v))
        full = _relative_residual(numall, v)
        if full <= tol:
            report.contained_directions.append(tuple(complex(z) for z in v))
            report.contained_residuals.append(full)
    return report


# -- resultant tests -----------------------------------------------------------------


def flecnode_eval(f: MultiPoly, p: Sequence, seed: int = 0) -> Fraction:
    """Res(F_1, F_2, F_3, F_4) at p; zero iff some line osculates to order four."""
    p = _on_variety(f, p)
    if f.degree() < 4:
        raise ZeroFormsError("deg f < 4 leaves some osculation form identically zero")
    forms = osculation_forms(f, p, count=4)
    if any(F.is_zero() for F in forms):
        # a vanishing form leaves three forms in four unknowns, which always share a zero
        return Fraction(0)
    return macaulay_resultant(forms, [1, 2, 3, 4], seed=seed)


def u_resultant_eval(f: MultiPoly, p: Sequence, u: Sequence, seed: int = 0) -> Fraction:
    """Res(F_1, F_2, F_3, u . v) at p for a numeric u."""
    p = _on_variety(f, p)
    if f.degree() < 3:
        raise ZeroFormsError("deg f < 3 leaves F_3 identically zero")
    forms = osculation_forms(f, p, count=3)
    u = [Q(c) for c in u]
    if not any(u) or any(F.is_zero() for F in forms):
        return Fraction(0)
    return macaulay_resultant(forms + [MultiPoly.linear_form(u, 0, V4)], [1, 2, 3, 1], seed=seed)


@dataclass
class UResultantTest:
    identically_zero: bool
    structural: bool
    trials: int
    sample_range: int
    failure_bound: float


def u_resultant_test(f: MultiPoly, p: Sequence, seed: int = 0, trials: int = 40,
                     sample_range: int = 10 ** 6) -> UResultantTest:
    """Schwartz-Zippel test for U(p; u) vanishing identically in u.

    U has degree 6 in u, so each nonzero-polynomial trial is zero with
    probability at most 6 / (2 * sample_range + 1); one nonzero value
    certifies non-vanishing.  A vanishing osculation form decides the answer
    structurally (infinitely many solutions).
    """
    p = _on_variety(f, p)
    forms = osculation_forms(f, p, count=3)
    if any(F.is_zero() for F in forms):
        return UResultantTest(True, True, 0, sample_range, 0.0)
    rng = random.Random(seed)
    per_trial = 6 / (2 * sample_range + 1)
    for t in range(1, trials + 1):
        u = [rng.randint(-sample_range, sample_range) for _ in range(4)]
        if u_resultant_eval(f, p, u, seed=seed) != 0:
            return UResultantTest(False, False, t, sample_range, 0.0)
    return UResultantTest(True, False, trials, sample_range, per_trial ** trials)


def u_resultant_identically_zero(f: MultiPoly, p: Sequence, seed: int = 0, trials: int = 40) -> bool:
    return u_resultant_test(f, p, seed, trials).identically_zero


def u_resultant_coefficients(f: MultiPoly, p: Sequence, seed: int = 0) -> dict:
    """All 84 coefficients of U(p; u) as a sextic form in u, by exact interpolation."""
    p = _on_variety(f, p)
    monos = monomials(4, 6)
    forms = osculation_forms(f, p, count=3)
    if f.degree() < 3 or any(F.is_zero() for F in forms):
        return {m: Fraction(0) for m in monos}
    rng = random.Random(seed)
    while True:
        pts = [[rng.randint(-50, 50) for _ in range(4)] for _ in monos]
        rows = [[math.prod(Fraction(x) ** e for x, e in zip(u, m)) for m in monos] for u in pts]
        if fraction_free_det(rows) != 0:
            break
    vals = [u_resultant_eval(f, p, u, seed=seed) for u in pts]
    return dict(zip(monos, solve(rows, vals)))


# -- flatness ------------------------------------------------------------------------


def _cross3(a, b):
    return [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]


def flat_polynomials(f: MultiPoly) -> list[MultiPoly]:
    """The nine (grad h x e_j)^T H_h (grad h x e_j) over the x-, y- and z-slices.

    In each slice h is f with the slice coordinate held as a parameter, so
    grad h and H_h are taken over the three free coordinates; e_1, e_2, e_3
    are the unit vectors along those coordinates in increasing order.
    """
    if f.degree() < 2:
        return [MultiPoly({}, f.variables) for _ in range(9)]
    zero = MultiPoly({}, f.variables)
    grad = f.gradient()
    hess = f.hessian()
    out = []
    for _, free in SLICES:
        g = [grad[i] for i in free]
        H = [[hess[i][j] for j in free] for i in free]
        for j in range(3):
            e = [zero + int(t == j) for t in range(3)]
            c = _cross3(g, e)
            Hc = [sum((H[r][s] * c[s] for s in range(3)), zero) for r in range(3)]
            out.append(sum((c[r] * Hc[r] for r in range(3)), zero))
    return out


@dataclass
class FlatnessCertificate:
    point: tuple
    singular: bool
    axis_degenerate: bool
    pi_values: list
    sff_matrix: list | None
    is_flat: bool
    # False when in some slice the slice gradient is parallel to a slice axis;
    # there the nine values can all vanish at a non-flat point
    pi_conclusive: bool = True

    def to_json(self) -> dict:
        return {"point": [str(c) for c in self.point], "singular": self.singular,
                "axis_degenerate": self.axis_degenerate, "pi_conclusive": self.pi_conclusive,
                "pi_values": [str(v) for v in self.pi_values],
                "sff_matrix": None if self.sff_matrix is None
                else [[str(v) for v in row] for row in self.sff_matrix],
                "flat": self.is_flat}


def tangent_basis(gradient: Sequence) -> list[list[Fraction]]:
    """Canonical (RREF kernel) rational basis of the hyperplane orthogonal to a nonzero gradient."""
    return nullspace([[Q(g) for g in gradient]], ncols=4)


def second_fundamental_form(f: MultiPoly, p: Sequence) -> list[list[Fraction]] | None:
    """Hessian at p restricted to the tangent basis; None at a singular point."""
    p = [Q(c) for c in p]
    grad = [g(p) for g in f.gradient()]
    if not any(grad):
        return None
    B = tangent_basis(grad)
    H = [[h(p) for h in row] for row in f.hessian()]
    HB = [[sum(H[r][s] * b[s] for s in range(4)) for r in range(4)] for b in B]
    return [[sum(a[r] * hb[r] for r in range(4)) for hb in HB] for a in B]


def _axis_degenerate(grad: Sequence[Fraction]) -> bool:
    nz = [i for i, g in enumerate(grad) if g]
    return len(nz) == 1 and nz[0] < 3


def _pi_conclusive(grad: Sequence[Fraction]) -> bool:
    return all(sum(1 for i in free if grad[i]) >= 2 for _, free in SLICES)


def flatness_certificate(f: MultiPoly, p: Sequence, pis: Sequence[MultiPoly] | None = None) -> FlatnessCertificate:
    """Flatness of Z(f) at p from the nine slice polynomials and the restricted Hessian.

    ``is_flat`` needs a non-singular, non-axis-degenerate point with all nine
    values zero and a zero restricted Hessian; the last condition only
    matters where ``pi_conclusive`` is false.
    """
    p = _on_variety(f, p)
    grad = [g(p) for g in f.gradient()]
    singular = not any(grad)
    axis = not singular and _axis_degenerate(grad)
    pis = flat_polynomials(f) if pis is None else pis
    values = [P(p) for P in pis]
    sff = second_fundamental_form(f, p)
    flat = (not singular and not axis and not any(values)
            and not any(v for row in sff for v in row))
    return FlatnessCertificate(tuple(p), singular, axis, values, sff, flat,
                               pi_conclusive=not singular and _pi_conclusive(grad))


def _projected_hessian_on_line(f: MultiPoly, line: Line4) -> list[list[UniPoly]]:
    """P H P along the line, with P = |g|^2 I - g g^T the scaled tangent projector.

    For a real non-singular point P H P vanishes iff the Hessian vanishes on
    the tangent hyperplane, independently of the coordinate frame.
    """
    g = _restricted_gradient(f, line)
    H = [[restrict_to_line(h, line.base, line.dir) for h in row] for row in f.hessian()]
    gg = sum((gi * gi for gi in g), UniPoly())
    P = [[(gg if i == j else UniPoly()) - g[i] * g[j] for j in range(4)] for i in range(4)]

    def mul(A, B):
        return [[sum((A[i][k] * B[k][j] for k in range(4)), UniPoly()) for j in range(4)]
                for i in range(4)]
    return mul(mul(P, H), P)


def is_flat_line(f: MultiPoly, line: Line4, pis: Sequence[MultiPoly] | None = None):
    """Whether a contained, non-singular line is flat, or SINGULAR_LINE.

    The nine slice polynomials must vanish identically along the line, and
    so must the tangent-projected Hessian, which catches lines along which a
    slice gradient stays parallel to a slice axis.
    """
    if singular_count_on_line(f, line) == SINGULAR_LINE:
        return SINGULAR_LINE
    pis = flat_polynomials(f) if pis is None else pis
    if not all(restrict_to_line(P, line.base, line.dir).is_zero() for P in pis):
        return False
    return all(e.is_zero() for row in _projected_hessian_on_line(f, line) for e in row)


def tangent_constant_on_line(f: MultiPoly, line: Line4) -> bool:
    """Whether grad f keeps one projective direction along the non-singular part of the line."""
    _line_on_variety(f, line)
    g = _restricted_gradient(f, line)
    if gcd_many(g).is_zero():
        raise NotOnVarietyError("tangent hyperplane undefined along a singular line")
    t0 = next(Fraction(t) for t in range(len(max(g, key=lambda u: len(u.coeffs)).coeffs) + 1)
              if any(u(t) for u in g))
    ref = [u(t0) for u in g]
    return all((g[i] * ref[j] - g[j] * ref[i]).is_zero() for i in range(4) for j in range(i + 1, 4))


# -- generic frames ------------------------------------------------------------------


def random_rational_rotation(seed: int = 0, spread: int = 3) -> list[list[Fraction]]:
    """Orthogonal rational 4x4 matrix (I - S)(I + S)^{-1} for a random skew-symmetric integer S."""
    rng = random.Random(seed)
    S = [[Fraction(0)] * 4 for _ in range(4)]
    for i in range(4):
        for j in range(i + 1, 4):
            v = rng.randint(-spread, spread)
            S[i][j], S[j][i] = Fraction(v), Fraction(-v)
    I = [[Fraction(int(i == j)) for j in range(4)] for i in range(4)]
    plus = [[I[i][j] + S[i][j] for j in range(4)] for i in range(4)]
    minus = [[I[i][j] - S[i][j] for j in range(4)] for i in range(4)]
    # columns of (I + S)^{-1}; I + S is invertible because S has imaginary spectrum
    inv_cols = [solve(plus, [I[r][c] for r in range(4)]) for c in range(4)]
    return [[sum(minus[i][k] * inv_cols[j][k] for k in range(4)) for j in range(4)] for i in range(4)]


def transform_poly(f: MultiPoly, M: Sequence[Sequence], shift: Sequence = (0, 0, 0, 0)) -> MultiPoly:
    """x -> f(M x + shift)."""
    images = [MultiPoly.linear_form(row, b, f.variables) for row, b in zip(M, shift)]
    return f.substitute(images)
