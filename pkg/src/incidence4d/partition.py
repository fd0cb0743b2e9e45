"""Desk-scale polynomial partitioning and the incidence split it induces.

A partitioning polynomial is built stage by stage.  At stage j the current
2^(j-1) sign classes are bisected simultaneously by one polynomial of the
smallest degree whose monomial lift has enough coordinates; the bisector is
found by aligning the group medians in the lifted space (a discrete
ham-sandwich search, finished by linear programming), then snapped to exact rational coefficients so that
odd groups have their median point exactly on the zero set.

Connected components of the complement of Z(f) refine sign classes, so the
largest sign class bounds the largest cell from above; sign classes are the
measurable surrogate used throughout.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import comb, lcm
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix, hstack, identity

from .errors import ConfigError
from .exactmath.linalg import solve_integer_square
from .exactmath.poly import MultiPoly, Q, monomials
from .exactmath.unipoly import UniPoly, square_free_part, sturm_distinct_real_roots, uni_gcd
from .geom import Config, Line4, incidence_pairs
from .structure import BoundConstants

DEFAULT_DELTA = 0.05
DEFAULT_RETRIES = 4
# fitted by scripts/fit_warren.py on the reference sweep, then frozen
WARREN_CONSTANT = 2.0
_SNAP_BITS = 40
_MAX_STAGE_DEGREE = 12
_RANK_SLACK = 2


@dataclass(frozen=True)
class PartitionPlan:
    m: int
    n: int
    regime: str
    r: int
    D: int
    E: int | None = None
    a: float = 1.0
    c0: float = 1.0
    c_star: float = 1.0

    def to_json(self) -> dict:
        return asdict(self)


def _largest_root(limit: Fraction, power: int) -> int:
    """Largest integer D >= 0 with D^power <= limit."""
    D = max(int(float(limit) ** (1 / power)) - 1, 0) if limit > 0 else 0
    while (D + 1) ** power <= limit:
        D += 1
    while D > 0 and D ** power > limit:
        D -= 1
    return D


def choose_degree(m: int, n: int, consts: BoundConstants = BoundConstants(),
                  two_stage: bool = False, c_star: float = 1.0) -> PartitionPlan:
    """Partition degree from the input sizes, decided in exact arithmetic.

    Small-m regime iff m <= a n^{4/3}; there D = floor(c0 m^{2/5} / n^{1/5}),
    otherwise D = floor(c0 n / m^{1/2}); D is clamped to at least 1 and
    r = D^4.  With ``two_stage`` the second-stage degree
    E = ceil(2^{c* sqrt(log2 m)}) is filled in.
    """
    if m < 1 or n < 1:
        raise ValueError("need m, n >= 1")
    a, c0 = Q(consts.a), Q(consts.c0)
    small = Fraction(m) ** 3 <= a ** 3 * Fraction(n) ** 4
    if small:
        D = _largest_root(c0 ** 5 * m ** 2 / n, 5)
    else:
        D = _largest_root(c0 ** 2 * n ** 2 / m, 2)
    D = max(D, 1)
    E = None
    if two_stage:
        E = max(1, math.ceil(2 ** (c_star * math.sqrt(math.log2(m))) - 1e-12)) if m > 1 else 1
    return PartitionPlan(m, n, "small-m" if small else "large-m", D ** 4, D, E,
                         consts.a, consts.c0, c_star)


def stage_degree(groups: int) -> int:
    """Smallest d with C(d+4, 4) - 1 >= groups."""
    d = 1
    while comb(d + 4, 4) - 1 < groups:
        d += 1
    return d


# -- exact evaluation on many points ---------------------------------------------------


def _integer_points(points: Sequence[Sequence]) -> tuple[np.ndarray, int]:
    den = 1
    for p in points:
        for x in p:
            den = lcm(den, Q(x).denominator)
    X = np.array([[int(Q(x) * den) for x in p] for p in points], dtype=object).reshape(len(points), 4)
    return X, den


def eval_many(f: MultiPoly, points: Sequence[Sequence]) -> list[Fraction]:
    """Exact values of f at many rational points, via one integer matrix product."""
    if not points:
        return []
    if f.is_zero():
        return [Fraction(0)] * len(points)
    X, den = _integer_points(points)
    d = f.degree()
    items = list(f.terms.items())
    cden = 1
    for _, c in items:
        cden = lcm(cden, c.denominator)
    coef = np.array([int(c * cden) * den ** (d - sum(e)) for e, c in items], dtype=object)
    lift = np.ones((len(points), len(items)), dtype=object)
    for t, (e, _) in enumerate(items):
        col = np.ones(len(points), dtype=object)
        for i, k in enumerate(e):
            if k:
                col = col * X[:, i] ** k
        lift[:, t] = col
    vals = lift.dot(coef)
    scale = cden * den ** d
    return [Fraction(int(v), scale) for v in vals]


def restrict_many(f: MultiPoly, lines: Sequence[Line4]) -> list[UniPoly]:
    """f restricted to each line, by exact evaluation at deg+1 parameters and interpolation."""
    d = max(f.degree(), 0)
    ts = list(range(d + 1))
    pts = [l.at(t) for l in lines for t in ts]
    vals = eval_many(f, pts)
    out = []
    for i in range(len(lines)):
        out.append(_interpolate(ts, vals[i * (d + 1):(i + 1) * (d + 1)]))
    return out


def _interpolate(xs: Sequence[int], ys: Sequence[Fraction]) -> UniPoly:
    # Newton divided differences, exact
    coef = list(ys)
    n = len(xs)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    p = UniPoly([coef[-1]])
    for i in range(n - 2, -1, -1):
        p = p * UniPoly([-xs[i], 1]) + UniPoly([coef[i]])
    return p


# -- stage search ---------------------------------------------------------------------


@dataclass
class StageLog:
    degree: int
    groups: int
    max_imbalance: float
    attempts: int
    ok: bool

    def to_json(self) -> dict:
        return {"degree": self.degree, "groups": self.groups,
                "max_imbalance": self.max_imbalance, "attempts": self.attempts, "ok": self.ok}


class _Lift:
    """Monomial lift of normalized integer coordinates Y = X - center, scaled by s."""

    def __init__(self, X: np.ndarray, center: list[int], s: int, d: int):
        self.monos = monomials(4, d, exact=False)
        self.d, self.s = d, s
        Y = X - np.array(center, dtype=object)[None, :]
        U = np.array(Y.tolist(), dtype=float) / s
        E = np.array(self.monos, dtype=int)
        self.float = np.prod(U[:, None, :] ** E[None, :, :], axis=2)
        self.Y = Y
        self.E = E

    def exact_rows(self, idx: Sequence[int]) -> list[list[int]]:
        """Integer lift rows Y^alpha s^(d - |alpha|) for the given points."""
        rows = []
        for i in idx:
            y = [int(v) for v in self.Y[i]]
            rows.append([math.prod(y[k] ** e[k] for k in range(4)) * self.s ** (self.d - sum(e))
                         for e in self.monos])
        return rows

    def exact_values(self, coef: list[int]) -> np.ndarray:
        """Integer values of sum coef_alpha Y^alpha s^(d-|alpha|) at every point."""
        out = np.zeros(len(self.Y), dtype=object)
        for c, e in zip(coef, self.monos):
            if not c:
                continue
            col = np.full(len(self.Y), c * self.s ** (self.d - sum(e)), dtype=object)
            for k in range(4):
                if e[k]:
                    col = col * self.Y[:, k] ** e[k]
            out = out + col
        return out

    def poly(self, coef: list[int], den: int, center: list[int]) -> MultiPoly:
        """The bisector as a polynomial in the original coordinates x = X / den."""
        terms = {e: c * self.s ** (self.d - sum(e)) for c, e in zip(coef, self.monos) if c}
        h = MultiPoly(terms)
        images = [MultiPoly.linear_form([den if j == i else 0 for j in range(4)], -center[i])
                  for i in range(4)]
        return h.substitute(images)


def _median_rows(values: np.ndarray, groups: list[np.ndarray]):
    """Per group: indices whose lift rows define the median target, and whether the size is odd."""
    out = []
    for g in groups:
        order = g[np.argsort(values[g], kind="stable")]
        k = len(g)
        if k % 2:
            out.append(([order[k // 2]], True))
        else:
            out.append(([order[k // 2 - 1], order[k // 2]], False))
    return out


def _group_imbalance(vals: np.ndarray, groups: list[np.ndarray], rel_tol: float = 1e-7) -> float:
    # values this close to zero are medians the exact snap will put on the zero set
    tol = rel_tol * (float(np.max(np.abs(vals))) if len(vals) else 0.0)
    return max(max(int(np.sum(vals[g] > tol)), int(np.sum(vals[g] < -tol))) / len(g) for g in groups)


def _soft_balance(B: np.ndarray, groups: list[np.ndarray], b: np.ndarray, iters: int) -> np.ndarray:
    """Gauss-Newton on mean(tanh(v / tau)) = 0 per group, with tau shrinking."""
    for t in range(iters):
        v = B @ b
        b = b / (np.max(np.abs(v)) or 1.0)
        v = B @ b
        shrink = 0.3 * 0.85 ** t
        r = np.empty(len(groups))
        J = np.empty((len(groups), B.shape[1]))
        for k, g in enumerate(groups):
            vg = v[g]
            tau = shrink * (float(np.median(np.abs(vg - np.median(vg)))) or 1e-3)
            th = np.tanh(vg / tau)
            r[k] = th.mean()
            J[k] = ((1 - th ** 2) / tau) @ B[g] / len(g)
        b = b + np.linalg.lstsq(J, -r, rcond=None)[0]
    return b


def _align(lift: _Lift, groups: list[np.ndarray], rng: np.random.Generator, iters: int = 60,
           lp_rounds: int = 12):
    """Coefficients a with every group median (or mid-gap) on {lift . a = 0}.

    A smoothed balance condition gets close and median chasing refines it;
    when some group is still unbalanced, a labelling is fitted by linear
    programming.  The search runs in the row space of the lift on the point
    set, so no effort goes into directions that vanish on every point.
    """
    Phi = lift.float
    _, sv, Vt = np.linalg.svd(Phi, full_matrices=False)
    V = Vt[sv > 1e-9 * sv[0]].T
    B = Phi @ V
    b = rng.standard_normal(V.shape[1])
    if len(groups) > 1:
        b = _soft_balance(B, groups, b, 25)
    best = None
    for _ in range(iters):
        vals = B @ b
        b = b / (np.max(np.abs(vals)) or 1.0)
        vals = B @ b
        med = _median_rows(vals, groups)
        # each group is measured against its own spread, so groups whose values
        # are small overall are not left unbalanced by a globally tiny residual
        scale = _group_scales(vals, groups)
        R = np.array([B[idx].mean(axis=0) for idx, _ in med]) / scale[:, None]
        r = R @ b
        err = float(np.max(np.abs(r)))
        key = (_group_imbalance(vals, groups), err)
        if best is None or key < best[0]:
            best = (key, V @ b, med)
        if err < 1e-13:
            break
        # the median map is piecewise linear, so full Newton steps can cycle
        step = np.linalg.lstsq(R, -r, rcond=None)[0]
        for alpha in (1.0, 0.5, 0.25, 0.125, 0.0625):
            trial = b + alpha * step
            if _median_residual(B @ trial, groups) < err:
                break
        b = trial
    a = best[1]
    # anything short of an exact split is handed to the linear-programming finish
    if best[0][0] > 0.5 and len(groups) > 1:
        b = _lp_polish(B, groups, V.T @ a, lp_rounds)
        vals = B @ b
        if _group_imbalance(vals, groups) < best[0][0]:
            a = V @ b
            best = (None, a, _median_rows(vals, groups))
    return a, best[2]


def _balanced_labels(vals: np.ndarray, groups: list[np.ndarray]):
    """Upper half +1, lower half -1 in each group; odd medians are returned apart."""
    rows, y, medians = [], [], []
    for g in groups:
        order = g[np.argsort(vals[g], kind="stable")]
        k = len(g)
        rows.extend(order[: k // 2])
        y.extend([-1.0] * (k // 2))
        rows.extend(order[(k + 1) // 2:])
        y.extend([1.0] * (k // 2))
        if k % 2:
            medians.append(order[k // 2])
    return np.array(rows, dtype=int), np.array(y), medians


def _damped_chase(B: np.ndarray, groups: list[np.ndarray], b: np.ndarray, iters: int) -> np.ndarray:
    for _ in range(iters):
        vals = B @ b
        b = b / (np.max(np.abs(vals)) or 1.0)
        R = np.array([B[idx].mean(axis=0) for idx, _ in _median_rows(B @ b, groups)])
        r = R @ b
        if np.max(np.abs(r)) < 1e-14:
            break
        b = b + 0.5 * np.linalg.lstsq(R, -r, rcond=None)[0]
    return b


def _lp_polish(B: np.ndarray, groups: list[np.ndarray], b: np.ndarray, rounds: int) -> np.ndarray:
    """Fix the balanced labelling the current values suggest and fit it with margin.

    Each round is one linear program (odd medians on the zero set, every
    other point on its labelled side by margin 1, total hinge slack
    minimized) followed by a few damped median-chasing steps, which break
    the cycles plain relabelling falls into.  Columns are normalized first;
    without that the solver's equality residuals are far too large.
    """
    cn = np.linalg.norm(B, axis=0)
    cn[cn == 0] = 1.0
    U = B / cn
    c = b * cn
    N = U.shape[1]
    best = (_group_imbalance(B @ b, groups), b)
    for _ in range(rounds):
        rows, y, medians = _balanced_labels(U @ c, groups)
        M = len(rows)
        A_ub = hstack([csr_matrix(-(y[:, None] * U[rows])), -identity(M)])
        A_eq = hstack([csr_matrix(U[medians]), csr_matrix((len(medians), M))]) if medians else None
        res = linprog(np.concatenate([np.zeros(N), np.ones(M)]), A_ub=A_ub, b_ub=-np.ones(M),
                      A_eq=A_eq, b_eq=np.zeros(len(medians)) if medians else None,
                      bounds=[(None, None)] * N + [(0, None)] * M, method="highs")
        if res.x is None:
            break
        c = res.x[:N]
        imb = _group_imbalance(U @ c, groups)
        if imb < best[0]:
            best = (imb, c / cn)
        if res.fun < 1e-6:
            break
        c = _damped_chase(U, groups, c, 10)
    return best[1]


def _group_scales(vals: np.ndarray, groups: list[np.ndarray]) -> np.ndarray:
    return np.array([float(np.max(np.abs(vals[g]))) or 1.0 for g in groups])


def _median_residual(vals: np.ndarray, groups: list[np.ndarray]) -> float:
    scale = _group_scales(vals, groups)
    return max(abs(float(np.mean(vals[idx]))) / sc for (idx, _), sc in zip(_median_rows(vals, groups), scale))


def _snap(lift: _Lift, a: np.ndarray, med) -> list[int] | None:
    """Exact integer coefficients near ``a`` putting each odd-group median exactly on the zero set."""
    odd = [idx[0] for idx, is_odd in med if is_odd]
    if odd:
        # project onto the median constraints first, so the exact correction
        # below only absorbs rounding error
        J = np.array([lift.float[i] for i in odd])
        for _ in range(2):
            a = a - np.linalg.lstsq(J, J @ a, rcond=None)[0]
    a = a / np.max(np.abs(a))
    coef = [int(round(float(v) * 2 ** _SNAP_BITS)) for v in a]
    if not odd:
        return coef
    # greedy column pivoting picks a well-conditioned square block to solve exactly
    cols, basis = [], []
    for _ in range(len(odd)):
        best, bnorm = None, 0.0
        for c in range(J.shape[1]):
            if c in cols:
                continue
            v = J[:, c].copy()
            for q in basis:
                v = v - q * (q @ v)
            nv = float(np.linalg.norm(v))
            if nv > bnorm:
                best, bnorm, bv = c, nv, v
        if best is None or bnorm < 1e-12:
            return None
        cols.append(best)
        basis.append(bv / bnorm)
    rows = lift.exact_rows(odd)
    rest = [c for c in range(len(coef)) if c not in cols]
    A = [[row[c] for c in cols] for row in rows]
    b = [-sum(row[c] * coef[c] for c in rest) for row in rows]
    x = solve_integer_square(A, b)
    if x is None:
        return None
    den = 1
    for v in x:
        den = lcm(den, v.denominator)
    out = [c * den for c in coef]
    for c, v in zip(cols, x):
        out[c] = int(v * den)
    return out


def _alive(groups: list[np.ndarray]) -> np.ndarray:
    return np.concatenate(groups) if groups else np.array([], dtype=int)


def _imbalance(signs: np.ndarray, groups: list[np.ndarray]) -> float:
    worst = 0.0
    for g in groups:
        s = signs[g]
        worst = max(worst, max(int(np.sum(s > 0)), int(np.sum(s < 0))) / len(g))
    return worst


# -- partition --------------------------------------------------------------------------


@dataclass
class PartitionResult:
    factors: list
    stages: list
    signs: list
    sign_classes: dict
    P0: list
    r: int
    delta: float
    flagged: bool = False
    notes: list = field(default_factory=list)

    @property
    def degree(self) -> int:
        return sum(g.degree() for g in self.factors)

    @property
    def f(self) -> MultiPoly:
        out = MultiPoly.constant(1)
        for g in self.factors:
            out = out * g
        return out

    @property
    def max_class_count(self) -> int:
        return max(self.sign_classes.values(), default=0)


def build_partition(points: Sequence[Sequence], r: int, seed: int = 0, delta: float = DEFAULT_DELTA,
                    retries: int = DEFAULT_RETRIES) -> PartitionResult:
    """Iterated simultaneous bisection until at least r sign classes are targeted."""
    pts = [tuple(Q(x) for x in p) for p in points]
    if len(pts) < 2:
        raise ValueError("need at least two points")
    if r < 2:
        raise ValueError("need r >= 2")
    if len(set(pts)) != len(pts):
        raise ConfigError("points must be distinct")
    X, den = _integer_points(pts)
    lo = [min(int(v) for v in X[:, i]) for i in range(4)]
    hi = [max(int(v) for v in X[:, i]) for i in range(4)]
    center = [(a + b) // 2 for a, b in zip(lo, hi)]
    s = max(1, max(max(b - c, c - a) for a, b, c in zip(lo, hi, center)))
    m = len(pts)
    alive = np.arange(m)
    groups = [alive]
    sign_rows = np.zeros((m, 0), dtype=int)
    factors, logs, notes = [], [], []
    flagged = False
    nstages = math.ceil(math.log2(r))
    for j in range(1, nstages + 1):
        groups = [g for g in groups if len(g)]
        if not groups:
            break
        # on structured sets (grids with few distinct coordinates) the lift can have
        # rank below its width; the degree grows until the medians can be aligned
        d = stage_degree(len(groups))
        # the lift never has rank above the number of live points
        target = min(_RANK_SLACK * len(groups) + 1, len(_alive(groups)) - 1)
        while True:
            lift = _Lift(X, center, s, d)
            if d >= _MAX_STAGE_DEGREE or np.linalg.matrix_rank(lift.float) >= target:
                break
            d += 1
        best = None
        for attempt in range(retries + 1):
            rng = np.random.default_rng([seed, j, attempt])
            a, med = _align(lift, groups, rng)
            coef = _snap(lift, a, med)
            if coef is None:
                continue
            vals = lift.exact_values(coef)
            signs = np.array([(v > 0) - (v < 0) for v in vals], dtype=int)
            imb = _imbalance(signs, groups)
            # beyond the odd-group medians, extra zeros only shrink the classes
            # by discarding points into P0, so they are kept few
            extra = max(0, int(np.sum(signs[_alive(groups)] == 0)) - len(groups))
            ok = imb <= 0.5 + delta and extra <= max(len(groups), m // 20)
            score = (not ok, imb, extra)
            if best is None or score < best[0]:
                best = (score, coef, signs, attempt + 1)
            if ok:
                break
        if best is None:
            raise ConfigError(f"stage {j}: no exact bisector found")
        (bad, imb, _), coef, signs, tries = best
        ok = not bad
        flagged |= not ok
        if not ok:
            notes.append(f"stage {j}: imbalance {imb:.3f} or too many points on the zero set")
        logs.append(StageLog(d, len(groups), imb, tries, ok))
        factors.append(lift.poly(coef, den, center))
        sign_rows = np.concatenate([sign_rows, signs[:, None]], axis=1)
        new = []
        for g in groups:
            new.append(g[signs[g] > 0])
            new.append(g[signs[g] < 0])
        groups = new
    zero = np.any(sign_rows == 0, axis=1)
    P0 = [int(i) for i in np.nonzero(zero)[0]]
    classes: dict[tuple, int] = {}
    for i in np.nonzero(~zero)[0]:
        key = tuple(int(v) for v in sign_rows[i])
        classes[key] = classes.get(key, 0) + 1
    signs_out = [tuple(int(v) for v in row) for row in sign_rows]
    return PartitionResult(factors, logs, signs_out, classes, P0, r, delta, flagged, notes)


# -- classification and budgets ------------------------------------------------------


class Classification(NamedTuple):
    P0: list
    P_rest: list
    L0: list
    L_rest: list


def _factor_list(f) -> list[MultiPoly]:
    if isinstance(f, MultiPoly):
        return [f]
    return list(f)


def classify_indices(points: Sequence, lines: Sequence[Line4], f) -> Classification:
    """Index form of ``classify``; f may be one polynomial or a list of factors."""
    factors = _factor_list(f)
    if not factors or any(g.is_zero() for g in factors):
        raise ValueError("partitioning polynomial must be nonzero")
    on = [False] * len(points)
    for g in factors:
        for i, v in enumerate(eval_many(g, points)):
            on[i] |= v == 0
    contained = [False] * len(lines)
    for g in factors:
        for i, u in enumerate(restrict_many(g, lines)):
            contained[i] |= u.is_zero()
    return Classification([i for i, z in enumerate(on) if z], [i for i, z in enumerate(on) if not z],
                          [i for i, c in enumerate(contained) if c],
                          [i for i, c in enumerate(contained) if not c])


def classify(points: Sequence, lines: Sequence[Line4], f) -> Classification:
    """(P0, P', L0, L'): points on Z(f), the rest, lines inside Z(f), the rest.

    With a factor list, a line lies in Z(f) iff it lies in the zero set of
    some factor, since its restriction is the product of the factors'.
    """
    c = classify_indices(points, lines, f)
    return Classification([points[i] for i in c.P0], [points[i] for i in c.P_rest],
                          [lines[i] for i in c.L0], [lines[i] for i in c.L_rest])


def _distinct_real_roots_of_product(parts: Sequence[UniPoly]) -> int:
    # roots of each factor not already seen, so no Sturm chain exceeds one factor's degree
    seen = UniPoly([1])
    total = 0
    for u in parts:
        if u.degree() <= 0:
            continue
        new = square_free_part(u)
        if seen.degree() > 0:
            new = (new // uni_gcd(new, seen)).monic()
        if new.degree() > 0:
            total += sturm_distinct_real_roots(new)
            seen = seen * new
    return total


def crossing_budget_report(lines: Sequence[Line4], f) -> dict:
    """Distinct real crossings of each line with Z(f), against deg f and |L'|(1 + deg f)."""
    factors = _factor_list(f)
    deg = sum(g.degree() for g in factors)
    restricted: list[list[UniPoly]] = [[] for _ in lines]
    for g in factors:
        for i, u in enumerate(restrict_many(g, lines)):
            if u.is_zero():
                raise ValueError(f"line {i} lies inside Z(f); it belongs to L0")
            restricted[i].append(u)
    counts = [_distinct_real_roots_of_product(parts) for parts in restricted]
    bound = len(lines) * (1 + deg)
    violations = [i for i, c in enumerate(counts) if c > deg]
    return {"per_line": counts, "total": sum(counts), "degree": deg, "bound": bound,
            "within_bound": sum(counts) <= bound and not violations, "violations": violations}


def _summands(pairs, P0: set, L0: set) -> dict:
    out = {"I00": 0, "I0p": 0, "Ipp": 0, "Ip0": 0}
    for pi, li in pairs:
        if pi in P0:
            out["I00" if li in L0 else "I0p"] += 1
        else:
            out["Ip0" if li in L0 else "Ipp"] += 1
    return out


def two_stage_report(cfg: Config, consts: BoundConstants = BoundConstants(), seed: int = 0,
                     second_stage: bool = False, c_star: float = 1.0, delta: float = DEFAULT_DELTA,
                     retries: int = DEFAULT_RETRIES, crossings: bool = True) -> dict:
    """Partition a Config, split its incidences and check each budget.

    I(P, L) = I(P0, L0) + I(P0, L') + I(P', L') holds because a point off
    Z(f) cannot lie on a line inside Z(f); the report counts I(P', L0) too
    and lists it as a violation if it is ever nonzero.
    """
    m, n = cfg.m, cfg.n
    plan = choose_degree(m, n, consts, two_stage=second_stage, c_star=c_star)
    res = build_partition(cfg.points, max(plan.r, 2), seed=seed, delta=delta, retries=retries)
    P0 = set(res.P0)
    cls = classify_indices([], cfg.lines, res.factors)
    L0 = set(cls.L0)
    pairs = incidence_pairs(cfg.points, cfg.lines)
    summ = _summands(pairs, P0, L0)
    I = len(pairs)
    stages = len(res.stages)
    max_frac = res.max_class_count / m
    frac_budget = (0.5 + delta) ** stages
    warren = WARREN_CONSTANT * plan.D ** 4
    budgets = {
        "I0p_le_nD": {"value": summ["I0p"], "bound": n * plan.D, "ok": summ["I0p"] <= n * plan.D},
        "I0p_le_n_degf": {"value": summ["I0p"], "bound": n * res.degree,
                          "ok": summ["I0p"] <= n * res.degree},
        "max_class_fraction": {"value": max_frac, "bound": frac_budget, "ok": max_frac <= frac_budget},
        "sign_classes": {"value": len(res.sign_classes), "bound": warren,
                         "ok": len(res.sign_classes) <= warren},
    }
    violations = [k for k, v in budgets.items() if not v["ok"]]
    if summ["Ip0"]:
        violations.append("I(P',L0) nonzero")
    if summ["I00"] + summ["I0p"] + summ["Ipp"] != I:
        violations.append("summand identity")
    if res.flagged:
        violations.append("stage imbalance")
    if crossings:
        rest = [cfg.lines[i] for i in cls.L_rest]
        cr = crossing_budget_report(rest, res.factors) if rest else {
            "total": 0, "bound": 0, "within_bound": True, "violations": []}
        budgets["crossings"] = {"value": cr["total"], "bound": cr["bound"], "ok": cr["within_bound"],
                                "per_line_violations": cr["violations"]}
        if not cr["within_bound"]:
            violations.append("crossings")
    report = {
        "name": cfg.name,
        "plan": plan.to_json(),
        "degree": res.degree,
        "stages": [s.to_json() for s in res.stages],
        "sign_classes": len(res.sign_classes),
        "max_class_fraction": max_frac,
        "P0": len(P0),
        "L0": len(L0),
        "I": I,
        "summands": {k: summ[k] for k in ("I00", "I0p", "Ipp")},
        "budgets": budgets,
        "violations": violations,
    }
    if second_stage and len(P0) >= 2 and plan.E:
        sub_pts = [cfg.points[i] for i in sorted(P0)]
        sub_lines = [cfg.lines[i] for i in sorted(L0)]
        r2 = min(plan.E ** 4, len(sub_pts))
        res2 = build_partition(sub_pts, max(r2, 2), seed=seed + 1, delta=delta, retries=retries)
        cls2 = classify_indices([], sub_lines, res2.factors)
        pairs2 = incidence_pairs(sub_pts, sub_lines)
        summ2 = _summands(pairs2, set(res2.P0), set(cls2.L0))
        report["second_stage"] = {
            "E": plan.E, "r": r2, "degree": res2.degree,
            "stages": [s.to_json() for s in res2.stages],
            "sign_classes": len(res2.sign_classes), "P0": len(res2.P0), "L0": len(cls2.L0),
            "I": len(pairs2), "summands": {k: summ2[k] for k in ("I00", "I0p", "Ipp")},
            "identity": summ2["I00"] + summ2["I0p"] + summ2["Ipp"] == len(pairs2),
        }
    return report
