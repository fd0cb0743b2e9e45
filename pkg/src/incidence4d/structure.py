"""Structural parameters s, q of a line set and the incidence bound formulas.

s is the largest number of lines in a common 2-flat, q_hyperplane the largest
number in a common hyperplane and q_quadric the largest number found on a
common quadric.  All three are computed exactly from finitely many candidate
flats (quadric search is budgeted and flagged).

Hyperplane candidates are complete for the following reason.  Let H hold
t >= 2 lines that do not all lie in one 2-flat.  If two of them are skew they
span H.  Otherwise all pairs are coplanar; pick two, spanning a 2-flat pi, and
a third line outside pi: the three span a 3-flat inside H, which is H.  A
hyperplane whose lines all lie in one 2-flat holds at most s lines, and a
hyperplane through the s-witness attains at least that, so it is covered by
the witness candidate.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Sequence

import numpy as np

from .errors import ResourceLimitError
from .exactmath.linalg import nullspace, primitive_integer_vector
from .geom import (AffineFlat, Config, Line4, Quadric4, cross4,
                   flat_contains_line, incidence_count, quadric_contains_line,
                   quadric_line_conditions)

PAIR_CAP = int(os.environ.get("INCIDENCE4D_PAIR_CAP", 2_000_000))
TRIPLE_CAP = int(os.environ.get("INCIDENCE4D_TRIPLE_CAP", 50_000_000))
QUADRIC_BUDGET = int(os.environ.get("INCIDENCE4D_QUADRIC_BUDGET", 2_000))


@dataclass(frozen=True)
class BoundConstants:
    c: float = 0.0
    A: float = 1.0
    a: float = 1.0
    c0: float = 1.0

    def __post_init__(self):
        if min(self.c, self.A, self.a, self.c0) < 0:
            raise ValueError("bound constants must be nonnegative")


@dataclass
class StructuralParams:
    s: int
    s_witness: AffineFlat | None
    q_hyperplane: int
    q_hyperplane_witness: AffineFlat | None
    q_hyperplane_exhaustive: bool = True
    q_quadric: int | None = None
    q_quadric_witness: Quadric4 | None = None
    q_quadric_exhaustive: bool = False
    notes: list = field(default_factory=list)

    @property
    def q(self) -> int:
        return max(self.q_hyperplane, self.q_quadric or 0)


# -- integer view of a line set ------------------------------------------------------

_PAIRS6 = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
# entries above this make the int64 cross products unsafe
_NUMPY_LIMIT = 2 ** 12


def _det3(a, b, c):
    return (a[..., 0] * (b[..., 1] * c[..., 2] - b[..., 2] * c[..., 1])
            - a[..., 1] * (b[..., 0] * c[..., 2] - b[..., 2] * c[..., 0])
            + a[..., 2] * (b[..., 0] * c[..., 1] - b[..., 1] * c[..., 0]))


def _cross4_np(a, b, c):
    """Row-wise cross4 on (k, 4) integer arrays, same sign convention as geom.cross4."""
    out = np.empty_like(a)
    for skip in range(4):
        cols = [j for j in range(4) if j != skip]
        det = _det3(a[:, cols], b[:, cols], c[:, cols])
        out[:, skip] = det if skip % 2 == 0 else -det
    return out


def _primitive_rows(V):
    """Divide nonzero integer rows by their gcd and make the first nonzero entry positive."""
    g = np.gcd.reduce(np.abs(V), axis=1)
    V = V // g[:, None]
    lead = V[np.arange(len(V)), np.argmax(V != 0, axis=1)]
    return V * np.sign(lead)[:, None]


class _IntLines:
    """Lines as integer direction rows and integer base rows over one common denominator."""

    def __init__(self, lines: Sequence[Line4]):
        self.lines = list(lines)
        den = 1
        for l in lines:
            for x in l.base:
                den = lcm(den, x.denominator)
        self.den = den
        self.B = [tuple(int(x * den) for x in l.base) for l in lines]
        self.D = [tuple(l.dir) for l in lines]
        big = max(max(abs(v) for r in self.B + self.D for v in r), 1)
        self.vectorized = big <= _NUMPY_LIMIT
        if self.vectorized:
            self.Bn = np.array(self.B, dtype=np.int64)
            self.Dn = np.array(self.D, dtype=np.int64)

    def offset(self, i, j):
        return tuple(b - a for a, b in zip(self.B[i], self.B[j]))

    def pair_normal(self, i, j):
        """Normal of the 3-flat spanned by lines i, j; zero vector when they are coplanar."""
        # base offsets are scaled by den, which does not change the spanned directions
        return cross4(self.D[i], self.D[j], self.offset(i, j))

    def plane_key(self, i, j):
        if self.D[i] == self.D[j]:
            vecs = [self.D[i], self.offset(i, j)]
        else:
            vecs = [self.D[i], self.D[j]]
        return AffineFlat.from_vectors(self.lines[i].base, vecs)

    def hyperplane_key(self, normal, i):
        N = primitive_integer_vector(normal)
        return N, sum(n * b for n, b in zip(N, self.B[i]))

    def pair_chunks(self, size: int = 1 << 20):
        n = len(self.lines)
        I, J = np.triu_indices(n, 1)
        for s in range(0, len(I), size):
            yield I[s:s + size], J[s:s + size]

    def count_in_hyperplanes(self, keys) -> list[int]:
        """Lines inside each hyperplane N.x = c (x in base units scaled by den)."""
        if not isinstance(keys, np.ndarray):
            keys = [tuple(k[0]) + (k[1],) for k in keys]
        if len(keys) == 0:
            return []
        big = max(max(abs(v) for r in self.B + self.D for v in r), 1)
        nbig = max(int(np.max(np.abs(np.asarray(keys, dtype=object)))), 1)
        dtype = np.int64 if big * nbig * 8 < 2 ** 62 else object
        D = np.array(self.D, dtype=dtype)
        B = np.array(self.B, dtype=dtype)
        K = np.array(keys, dtype=dtype)
        out = []
        for start in range(0, len(K), 4096):
            chunk = K[start:start + 4096]
            N, c = chunk[:, :4].T, chunk[:, 4]
            inside = ((D @ N) == 0) & ((B @ N) == c[None, :])
            out.extend(int(v) for v in inside.sum(axis=0))
        return out

    def hyperplane_flat(self, key) -> AffineFlat:
        N, c = [int(v) for v in key[:4]], int(key[4])
        i = next(t for t in range(len(self.B))
                 if sum(a * b for a, b in zip(N, self.B[t])) == c)
        return AffineFlat.from_vectors(self.lines[i].base, nullspace([N], ncols=4))


def _guard_pairs(n: int, cap: int | None):
    cap = PAIR_CAP if cap is None else cap
    if n * (n - 1) // 2 > cap:
        raise ResourceLimitError(f"{n} lines give more than {cap} pairs")


def _plane_through_line(line: Line4) -> AffineFlat:
    for j in range(4):
        e = [0, 0, 0, 0]
        e[j] = 1
        F = AffineFlat.from_vectors(line.base, [line.dir, e])
        if F.dim == 2:
            return F
    raise AssertionError("unreachable")


def _hyperplane_through(F: AffineFlat) -> AffineFlat:
    for j in range(4):
        e = [0, 0, 0, 0]
        e[j] = 1
        H = AffineFlat.from_vectors(F.basepoint, list(F.directions) + [e])
        if H.dim == 3:
            return H
    raise AssertionError("unreachable")


def _group_members(keys: np.ndarray, I: np.ndarray, J: np.ndarray):
    """For keyed line pairs: (unique keys, number of distinct lines per key)."""
    uniq, inv = np.unique(keys, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    memb = np.unique(np.stack([np.concatenate([inv, inv]), np.concatenate([I, J])], axis=1), axis=0)
    return uniq, np.bincount(memb[:, 0], minlength=len(uniq)), memb


def _plane_keys_np(IL: _IntLines, I, J):
    """Canonical integer keys of the 2-flats spanned by coplanar pairs (I, J).

    A 2-flat is fixed by the primitive Pluecker vector P of its direction
    plane and by the moment B ^ P of any of its points, which is integral
    once P is primitive.
    """
    D, B = IL.Dn, IL.Bn
    u = D[I]
    par = np.all(D[I] == D[J], axis=1)
    v = np.where(par[:, None], B[J] - B[I], D[J])
    P = np.stack([u[:, a] * v[:, b] - u[:, b] * v[:, a] for a, b in _PAIRS6], axis=1)
    g = np.gcd.reduce(np.abs(P), axis=1)
    lead = P[np.arange(len(P)), np.argmax(P != 0, axis=1)]
    scale = np.sign(lead)
    M = _cross4_np(B[I], u, v)
    return np.concatenate([P // g[:, None] * scale[:, None], M // g[:, None] * scale[:, None]], axis=1)


def compute_s(lines: Sequence[Line4], pair_cap: int | None = None) -> tuple[int, AffineFlat]:
    """Max number of lines in one 2-flat, with a witness flat."""
    if not lines:
        raise ValueError("empty line set")
    _guard_pairs(len(lines), pair_cap)
    IL = _IntLines(lines)
    if not IL.vectorized:
        return _compute_s_scalar(IL)
    best = None
    for I, J in IL.pair_chunks():
        N = _cross4_np(IL.Dn[I], IL.Dn[J], IL.Bn[J] - IL.Bn[I])
        cop = ~np.any(N, axis=1)
        if not cop.any():
            continue
        I, J = I[cop], J[cop]
        keys = _plane_keys_np(IL, I, J)
        if best is None:
            best = (keys, I, J)
        else:
            best = tuple(np.concatenate([a, b]) for a, b in zip(best, (keys, I, J)))
    if best is None:
        return 1, _plane_through_line(lines[0])
    uniq, counts, memb = _group_members(*best)
    top = int(counts.max())
    # np.unique sorts keys, so the first maximal key is the lexicographically smallest
    kidx = int(np.argmax(counts == top))
    i, j = memb[memb[:, 0] == kidx][:2, 1]
    return top, IL.plane_key(int(i), int(j))


def _compute_s_scalar(IL: _IntLines) -> tuple[int, AffineFlat]:
    members: dict[AffineFlat, set] = {}
    for i, j in combinations(range(len(IL.lines)), 2):
        if any(IL.pair_normal(i, j)):
            continue
        members.setdefault(IL.plane_key(i, j), set()).update((i, j))
    if not members:
        return 1, _plane_through_line(IL.lines[0])
    best = max(members.items(), key=lambda kv: (len(kv[1]), _flat_order(kv[0])))
    return len(best[1]), best[0]


def _flat_order(F: AffineFlat):
    # deterministic tie-break: the lexicographically smallest flat wins
    return tuple(-x for row in F.directions for x in row) + tuple(-x for x in F.basepoint)


def _hyperplane_keys_np(normals, bases):
    N = _primitive_rows(normals)
    return np.concatenate([N, np.sum(N * bases, axis=1, keepdims=True)], axis=1)


def _intersection_keys(IL: _IntLines, I, J):
    """Canonical integer keys (x * den, den) of the meeting points of intersecting pairs."""
    D, B = IL.Dn, IL.Bn
    O = B[J] - B[I]
    minors = np.stack([D[I][:, a] * D[J][:, b] - D[I][:, b] * D[J][:, a] for a, b in _PAIRS6], axis=1)
    which = np.argmax(minors != 0, axis=1)
    rows = np.arange(len(I))
    a = np.array([p[0] for p in _PAIRS6])[which]
    b = np.array([p[1] for p in _PAIRS6])[which]
    den = minors[rows, which]
    num = O[rows, a] * D[J][rows, b] - O[rows, b] * D[J][rows, a]
    X = np.concatenate([den[:, None] * B[I] + num[:, None] * D[I], den[:, None]], axis=1)
    X = X * np.sign(den)[:, None]
    return X // np.gcd.reduce(np.abs(X), axis=1)[:, None]


def _best_parallel_plane(Y: np.ndarray):
    """Largest coplanar subset of 3D integer points not all collinear.

    Returns (count, (i, j, normal)) with i, j the two smallest indices on the
    plane, or None when every triple is collinear.  Cost is cubic but each
    anchor is one vectorized pass.
    """
    n = len(Y)
    best = None
    for i in range(n - 2):
        V = Y[i + 1:] - Y[i]
        J, K = np.triu_indices(len(V), 1)
        C = np.cross(V[J], V[K])
        zero = ~np.any(C, axis=1)
        # points collinear with (i, j) lie on every plane through both
        coll = np.bincount(J[zero], minlength=len(V))
        J, C = J[~zero], C[~zero]
        if not len(J):
            continue
        C = _primitive_rows(C)
        R = int(np.abs(C).max()) + 1
        W = 2 * R + 1
        if len(V) * W ** 3 < 2 ** 62:
            code = ((J * W + C[:, 0] + R) * W + C[:, 1] + R) * W + C[:, 2] + R
            _, order, cnt = np.unique(code, return_index=True, return_counts=True)
        else:
            _, order, cnt = np.unique(np.concatenate([J[:, None], C], axis=1), axis=0,
                                      return_index=True, return_counts=True)
        tot = 2 + coll[J[order]] + cnt
        t = int(np.argmax(tot))
        if best is None or tot[t] > best[0]:
            r = order[t]
            best = (int(tot[t]), (i, i + 1 + int(J[r]), C[r]))
    return best


def compute_q_hyperplane(lines: Sequence[Line4], triple_cap: int | None = None,
                         pair_cap: int | None = None, s_witness: AffineFlat | None = None):
    """Max number of lines in one hyperplane: (q, witness, exhaustive flag).

    Candidates are hyperplanes spanned by skew pairs, plus those spanned by
    pairwise-coplanar triples.  Three pairwise-coplanar lines that are not in
    one 2-flat are either concurrent or parallel, so the triples are taken
    from the pencils of lines through each meeting point and from each
    parallel class; for a parallel class the best hyperplane is the best
    plane through the base points in the quotient by the common direction.
    The triple budget counts both kinds; past it the flag is cleared.
    """
    if not lines:
        raise ValueError("empty line set")
    n = len(lines)
    if n == 1:
        return 1, _hyperplane_through(_plane_through_line(lines[0])), True
    _guard_pairs(n, pair_cap)
    triple_cap = TRIPLE_CAP if triple_cap is None else triple_cap
    IL = _IntLines(lines)
    if not IL.vectorized:
        return _q_hyperplane_scalar(IL, triple_cap, pair_cap, s_witness)
    D, B = IL.Dn, IL.Bn
    keys, meet_keys, meet_I, meet_J = [], [], [], []
    for I, J in IL.pair_chunks():
        N = _cross4_np(D[I], D[J], B[J] - B[I])
        skew = np.any(N, axis=1)
        if skew.any():
            keys.append(_hyperplane_keys_np(N[skew], B[I[skew]]))
        inter = ~skew & ~np.all(D[I] == D[J], axis=1)
        if inter.any():
            meet_keys.append(_intersection_keys(IL, I[inter], J[inter]))
            meet_I.append(I[inter])
            meet_J.append(J[inter])
    exhaustive = True
    budget = triple_cap
    if meet_keys:
        _, counts, memb = _group_members(np.concatenate(meet_keys), np.concatenate(meet_I),
                                         np.concatenate(meet_J))
        rich = np.nonzero(counts >= 3)[0]
        starts = np.searchsorted(memb[:, 0], rich)
        for r, st in zip(rich, starts):
            pencil = memb[st:st + counts[r], 1]
            t = len(pencil)
            budget -= t * (t - 1) * (t - 2) // 6
            if budget < 0:
                exhaustive = False
                break
            T = np.array(list(combinations(pencil, 3)))
            N = _cross4_np(D[T[:, 0]], D[T[:, 1]], D[T[:, 2]])
            ok = np.any(N, axis=1)
            if ok.any():
                keys.append(_hyperplane_keys_np(N[ok], B[T[ok, 0]]))
    _, cls_inv = np.unique(D, axis=0, return_inverse=True)
    cls_inv = cls_inv.reshape(-1)
    for cls in range(int(cls_inv.max()) + 1):
        idx = np.nonzero(cls_inv == cls)[0]
        t = len(idx)
        if t < 3:
            continue
        budget -= t * (t - 1) * (t - 2) // 6
        if budget < 0:
            exhaustive = False
            break
        d = D[idx[0]]
        p = int(np.argmax(d != 0))
        rest = [c for c in range(4) if c != p]
        found = _best_parallel_plane(B[idx][:, rest])
        if found is None:
            continue
        _, (i, _, n3) = found
        N = np.zeros(4, dtype=np.int64)
        N[rest] = d[p] * n3
        N[p] = -int(np.dot(n3, d[rest]))
        keys.append(_hyperplane_keys_np(N[None, :], B[idx[i]][None, :]))
    if s_witness is None:
        _, s_witness = compute_s(lines, pair_cap)
    H = _hyperplane_through(s_witness)
    wcount = sum(flat_contains_line(H, l) for l in lines)
    if not keys:
        return wcount, H, exhaustive
    uniq = np.unique(np.concatenate(keys), axis=0)
    counts = np.array(IL.count_in_hyperplanes(uniq))
    top = int(counts.max())
    if wcount > top:
        return wcount, H, exhaustive
    return top, IL.hyperplane_flat(uniq[int(np.argmax(counts == top))]), exhaustive


def _q_hyperplane_scalar(IL: _IntLines, triple_cap: int, pair_cap, s_witness):
    """Pure-integer fallback for coordinates too large for int64 products."""
    lines, n = IL.lines, len(IL.lines)
    candidates: dict[tuple, tuple] = {}
    adj: list[set] = [set() for _ in range(n)]
    for i, j in combinations(range(n), 2):
        N = IL.pair_normal(i, j)
        if any(N):
            candidates.setdefault(IL.hyperplane_key(N, i), (i, (IL.D[i], IL.D[j], IL.offset(i, j))))
        else:
            adj[i].add(j)
    exhaustive = True
    tried = 0
    for i in range(n):
        for j in sorted(x for x in adj[i] if x > i):
            for k in sorted(x for x in adj[i] & adj[j] if x > j):
                tried += 1
                if tried > triple_cap:
                    exhaustive = False
                    break
                vecs = [IL.D[i], IL.D[j], IL.D[k], IL.offset(i, j), IL.offset(i, k)]
                for a, b, c in combinations(vecs, 3):
                    N = cross4(a, b, c)
                    if any(N):
                        candidates.setdefault(IL.hyperplane_key(N, i), (i, (a, b, c)))
                        break
            if not exhaustive:
                break
        if not exhaustive:
            break
    if s_witness is None:
        _, s_witness = compute_s(lines, pair_cap)
    H = _hyperplane_through(s_witness)
    keys = list(candidates)
    counts = IL.count_in_hyperplanes(keys)
    best_count, best_key = 0, None
    for key, cnt in zip(keys, counts):
        if cnt > best_count or (cnt == best_count and best_key is not None and key < best_key):
            best_count, best_key = cnt, key
    witness = None
    if best_key is not None:
        i, vecs = candidates[best_key]
        witness = AffineFlat.from_vectors(lines[i].base, vecs)
    wcount = sum(flat_contains_line(H, l) for l in lines)
    if witness is None or wcount > best_count:
        best_count, witness = wcount, H
    return best_count, witness, exhaustive


def _kernel_with_quadratic(B: list[list[Fraction]]) -> bool:
    return any(any(v[:10]) for v in B)


def _restrict_basis(B, rows):
    """Sub-basis of span(B) satisfying the extra linear conditions ``rows``."""
    M = [[sum(r * b for r, b in zip(row, vec)) for vec in B] for row in rows]
    lam = nullspace(M, ncols=len(B))
    return [[sum(l * vec[t] for l, vec in zip(lv, B)) for t in range(15)] for lv in lam]


def compute_q_quadric(lines: Sequence[Line4], budget: int | None = None):
    """Best-found number of lines on one quadric: (q, witness, exhaustive flag).

    Every 5-subset whose 15 stacked line conditions leave a nonzero kernel
    seeds a candidate; the remaining lines are then absorbed greedily while a
    member with nonzero quadratic part survives.  ``exhaustive`` is true iff
    every 5-subset was examined within ``budget``.
    """
    if not lines:
        raise ValueError("empty line set")
    budget = QUADRIC_BUDGET if budget is None else budget
    n = len(lines)
    conds = [quadric_line_conditions(l) for l in lines]
    best = (0, None)

    def grow(seed: Sequence[int]):
        rows = [r for i in seed for r in conds[i]]
        B = nullspace(rows, ncols=15)
        if not _kernel_with_quadratic(B):
            return None
        for j in range(n):
            if j in seed:
                continue
            B2 = _restrict_basis(B, conds[j])
            if _kernel_with_quadratic(B2):
                B = B2
        vec = next(v for v in B if any(v[:10]))
        Qd = Quadric4.from_coeffs(vec)
        return sum(quadric_contains_line(Qd, l) for l in lines), Qd

    if n < 5:
        res = grow(tuple(range(n)))
        if res is None:
            return 0, None, True
        return res[0], res[1], True
    tried = 0
    exhaustive = True
    for subset in combinations(range(n), 5):
        if tried >= budget:
            exhaustive = False
            break
        tried += 1
        res = grow(subset)
        if res is not None and res[0] > best[0]:
            best = res
    if best[1] is None:
        # no five lines share a quadric, and any four always do
        res = grow(tuple(range(4)))
        best = res if res is not None else (0, None)
    return best[0], best[1], exhaustive


def structural_params(lines: Sequence[Line4], quadric_budget: int | None = None,
                      triple_cap: int | None = None, pair_cap: int | None = None) -> StructuralParams:
    s, sw = compute_s(lines, pair_cap)
    q, qw, qex = compute_q_hyperplane(lines, triple_cap, pair_cap, s_witness=sw)
    params = StructuralParams(s, sw, q, qw, qex)
    if not qex:
        params.notes.append("hyperplane triples exceeded cap; pairs-only result")
    if quadric_budget != 0:
        qq, qqw, qqex = compute_q_quadric(lines, quadric_budget)
        params.q_quadric, params.q_quadric_witness, params.q_quadric_exhaustive = qq, qqw, qqex
        if not qqex:
            params.notes.append("quadric 5-subset budget exhausted; best found")
    else:
        params.notes.append("quadric search skipped")
    return params


# -- bound formulas --------------------------------------------------------------------


def _log2(x: float) -> float:
    return math.log2(x) if x > 1 else 0.0


@dataclass
class BoundBreakdown:
    lead: float
    linear_m: float
    gk: float
    st: float
    linear_n: float

    @property
    def total(self) -> float:
        return self.lead + self.linear_m + self.gk + self.st + self.linear_n

    def as_dict(self) -> dict:
        return {"lead": self.lead, "linear_m": self.linear_m, "gk": self.gk,
                "st": self.st, "linear_n": self.linear_n, "total": self.total}


def bound_rhs(m: int, n: int, q: float, s: float, consts: BoundConstants = BoundConstants()):
    """Five terms of 2^{c sqrt(log m)} (m^{2/5} n^{4/5} + m) + A (m^{1/2} n^{1/2} q^{1/4} + m^{2/3} n^{1/3} s^{1/3} + n)."""
    if m < 1 or n < 1 or q < 0 or s < 0:
        raise ValueError("need m, n >= 1 and q, s >= 0")
    sub = 2.0 ** (consts.c * math.sqrt(_log2(m)))
    return BoundBreakdown(
        lead=sub * m ** 0.4 * n ** 0.8,
        linear_m=sub * m,
        gk=consts.A * math.sqrt(m * n) * q ** 0.25,
        st=consts.A * m ** (2 / 3) * n ** (1 / 3) * s ** (1 / 3),
        linear_n=consts.A * n,
    )


def richpoints_bound_rhs(n: int, q: float, s: float, k: int,
                         consts: BoundConstants = BoundConstants()) -> dict:
    """Terms of the bound on the number of points incident to at least k lines."""
    if n < 1 or k < 2:
        raise ValueError("need n >= 1 and k >= 2")
    terms = {
        "lead": 2.0 ** (4 / 3 * consts.c * math.sqrt(_log2(n))) * n ** (4 / 3) / k ** (5 / 3),
        "hyperplane": n * math.sqrt(q) / k ** 2,
        "plane": n * s / k ** 3,
        "linear": n / k,
    }
    terms["total"] = sum(terms.values())
    return terms


def ratio(I: int, m: int, n: int, alpha: float, beta: float) -> float:
    return I / (m ** alpha * n ** beta) if m and n else 0.0


def verify_bound(cfg: Config, consts: BoundConstants = BoundConstants(), params: StructuralParams | None = None,
                 quadric_budget: int | None = 0, method: str = "grouped", pair_cap: int | None = None) -> dict:
    """Measured incidences against the bound, plus the tightness ratios.

    When the line set is too large for the pair enumeration, q = s = n is
    used (always valid, since both parameters are at most n).
    """
    counts = incidence_count(cfg, method=method)
    m, n, I = cfg.m, cfg.n, counts.total
    report = {"name": cfg.name, "m": m, "n": n, "I": I,
              "max_per_line": max(counts.per_line, default=0),
              "max_per_point": max(counts.per_point, default=0)}
    if n == 0 or m == 0:
        report.update({"s": 0, "q_hyp": 0, "q_quad": None, "q_quad_exhaustive": None,
                       "rhs": None, "bound_ratio": 0.0, "lead_ratio": 0.0, "st_ratio": 0.0,
                       "gk_ratio": 0.0, "violation": False, "params_note": "empty"})
        return report
    note = ""
    if params is None:
        try:
            params = structural_params(cfg.lines, quadric_budget=quadric_budget, pair_cap=pair_cap)
        except ResourceLimitError as exc:
            note = f"params skipped: {exc}; using q = s = n"
    if params is not None:
        s, q = params.s, params.q
        report.update({"s": params.s, "q_hyp": params.q_hyperplane, "q_quad": params.q_quadric,
                       "q_quad_exhaustive": params.q_quadric_exhaustive if params.q_quadric is not None else None})
    else:
        s = q = n
        report.update({"s": None, "q_hyp": None, "q_quad": None, "q_quad_exhaustive": None})
    rhs = bound_rhs(m, n, q, s, consts)
    report.update({
        "rhs": rhs.as_dict(),
        "bound_ratio": I / rhs.total,
        "lead_ratio": ratio(I, m, n, 0.4, 0.8),
        "st_ratio": ratio(I, m, n, 2 / 3, 2 / 3),
        "gk_ratio": ratio(I, m, n, 0.5, 0.75),
        "violation": I > rhs.total,
        "params_note": note,
    })
    return report
