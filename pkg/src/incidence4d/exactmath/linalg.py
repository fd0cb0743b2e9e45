"""Exact linear algebra over Q: fraction-free determinants, RREF, kernels."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from ..errors import DimensionMismatch
from .poly import Q


@dataclass(frozen=True)
class RatMatrix:
    entries: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def of(cls, rows: Sequence[Sequence]) -> "RatMatrix":
        rows = tuple(tuple(Q(x) for x in r) for r in rows)
        if rows and len({len(r) for r in rows}) != 1:
            raise DimensionMismatch("ragged matrix")
        return cls(rows)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]


def _as_rows(M) -> list[list[Fraction]]:
    if isinstance(M, RatMatrix):
        return [list(r) for r in M.entries]
    return [[Q(x) for x in r] for r in M]


def integer_bareiss_det(A: list[list[int]]) -> int:
    """Determinant of a square integer matrix (modified in place) by Bareiss elimination."""
    n = len(A)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        rowk = A[k]
        for i in range(k + 1, n):
            rowi = A[i]
            aik = rowi[k]
            if aik == 0:
                # (akk*a_ij - 0*a_kj)/prev
                if akk != prev:
                    for j in range(k + 1, n):
                        if rowi[j]:
                            rowi[j] = rowi[j] * akk // prev
            else:
                for j in range(k + 1, n):
                    rowi[j] = (akk * rowi[j] - aik * rowk[j]) // prev
            rowi[k] = 0
        prev = akk
    return sign * A[n - 1][n - 1] if n else 1


def fraction_free_det(M) -> Fraction:
    """Exact determinant: clear row denominators, then integer Bareiss."""
    rows = _as_rows(M)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionMismatch("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    scale = 1
    ints = []
    for r in rows:
        den = 1
        for x in r:
            if x.denominator != 1:
                den = lcm(den, x.denominator)
        scale *= den
        ints.append([int(x * den) for x in r])
    return Fraction(integer_bareiss_det(ints), scale)


def solve_integer_square(A: Sequence[Sequence[int]], b: Sequence[int]) -> list[Fraction] | None:
    """Exact solution of a square integer system, or None when singular.

    Fraction-free elimination keeps every intermediate an integer; rationals
    appear only in the back substitution.
    """
    n = len(A)
    M = [[int(x) for x in row] + [int(bi)] for row, bi in zip(A, b)]
    prev = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k]), None)
        if piv is None:
            return None
        M[k], M[piv] = M[piv], M[k]
        akk, rowk = M[k][k], M[k]
        for i in range(k + 1, n):
            rowi = M[i]
            aik = rowi[k]
            for j in range(k + 1, n + 1):
                rowi[j] = (akk * rowi[j] - aik * rowk[j]) // prev
            rowi[k] = 0
        prev = akk
    x = [Fraction(0)] * n
    for k in range(n - 1, -1, -1):
        acc = Fraction(M[k][n]) - sum((M[k][j] * x[j] for j in range(k + 1, n)), Fraction(0))
        x[k] = acc / M[k][k]
    return x


def rref(M) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns; zero rows dropped."""
    A = _as_rows(M)
    if not A:
        return [], []
    nr, nc = len(A), len(A[0])
    pivots = []
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(nr):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return A[:r], pivots


def rank(M) -> int:
    return len(rref(M)[1])


def nullspace(M, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : M x = 0}, one vector per free column, in RREF-canonical form."""
    rows = _as_rows(M)
    nc = len(rows[0]) if rows else (ncols or 0)
    R, piv = rref(rows)
    free = [c for c in range(nc) if c not in piv]
    basis = []
    for fc in free:
        v = [Fraction(0)] * nc
        v[fc] = Fraction(1)
        for r, pc in enumerate(piv):
            v[pc] = -R[r][fc]
        basis.append(v)
    return basis


def solve(M, b) -> list[Fraction] | None:
    """One exact solution of M x = b, or None if inconsistent."""
    rows = _as_rows(M)
    aug = [r + [Q(bi)] for r, bi in zip(rows, b)]
    nc = len(rows[0])
    R, piv = rref(aug)
    if nc in piv:
        return None
    x = [Fraction(0)] * nc
    for r, pc in enumerate(piv):
        x[pc] = R[r][nc]
    return x


def matmul(A, B) -> list[list[Fraction]]:
    A, B = _as_rows(A), _as_rows(B)
    return [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in zip(*B)] for row in A]


def primitive_integer_vector(v: Sequence) -> tuple[int, ...]:
    """Scale a nonzero rational vector to coprime integers with positive leading entry."""
    from math import gcd
    v = [Q(x) for x in v]
    den = 1
    for x in v:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)
