"""Multipolynomial resultants as ratios of Macaulay determinants.

For homogeneous F_0..F_n in n+1 variables with degrees d_i, put
d = sum(d_i - 1) + 1.  Rows and columns of the Macaulay matrix are indexed by
the monomials of degree d; a monomial is assigned to the first i with
x_i^{d_i} dividing it, and its row holds the coefficients of
(x^alpha / x_i^{d_i}) * F_i.  The resultant is det(M) / det(M'), where M'
keeps only the rows and columns of non-reduced monomials (those divisible by
more than one x_i^{d_i}).  With identical row and column order this gives
Res(x_0^{d_0}, ..., x_n^{d_n}) = 1.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from ..errors import DegenerateSystemError, DimensionMismatch
from .linalg import fraction_free_det
from .poly import MultiPoly, monomials

DEFAULT_RETRIES = 3


def macaulay_matrices(forms: Sequence[MultiPoly], degrees: Sequence[int]):
    """Return (M, M_reduced_minor, monomial list) for the given forms."""
    nv = forms[0].nvars
    if len(forms) != nv or len(degrees) != nv:
        raise DimensionMismatch("need as many forms as variables")
    d = sum(degrees) - (nv - 1)
    monos = monomials(nv, d)
    index = {m: i for i, m in enumerate(monos)}
    size = len(monos)
    rows = []
    nonreduced = []
    for a in monos:
        divisible = [i for i in range(nv) if a[i] >= degrees[i]]
        i = divisible[0]
        if len(divisible) > 1:
            nonreduced.append(index[a])
        shift = list(a)
        shift[i] -= degrees[i]
        row = [Fraction(0)] * size
        for e, c in forms[i].terms.items():
            row[index[tuple(s + k for s, k in zip(shift, e))]] = c
        rows.append(row)
    minor = [[rows[r][c] for c in nonreduced] for r in nonreduced]
    return rows, minor, monos


def random_unimodular(n: int, rng: random.Random, steps: int | None = None) -> list[list[int]]:
    """Integer matrix with determinant exactly +1 (product of elementary shears)."""
    A = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps or 3 * n):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        A[i] = [a + c * b for a, b in zip(A[i], A[j])]
    return A


def linear_change(f: MultiPoly, A: Sequence[Sequence]) -> MultiPoly:
    """f(A v): variable j is replaced by sum_k A[j][k] v_k."""
    images = [MultiPoly.linear_form(row, 0, f.variables) for row in A]
    return f.substitute(images)


def _check(forms, degrees):
    for F, d in zip(forms, degrees):
        if F.is_zero():
            raise DegenerateSystemError("a form is identically zero")
        if any(sum(e) != d for e in F.terms):
            raise ValueError(f"form is not homogeneous of declared degree {d}")


def _shifted_det(M, lam: Fraction) -> Fraction:
    return fraction_free_det([[x - lam if r == c else x for c, x in enumerate(row)]
                              for r, row in enumerate(M)])


def perturbed_resultant(M, Mp) -> Fraction:
    """Res = P(0) where P(lam) = det(M - lam I) / det(M' - lam I).

    Replacing F_i by F_i - lam x_i^{d_i} subtracts lam from exactly the
    diagonal of both Macaulay matrices, so P is the resultant of the
    perturbed system, a polynomial in lam of degree at most
    size(M) - size(M').  It is recovered exactly by interpolation at
    integer lam avoiding the roots of the denominator.
    """
    deg = len(M) - len(Mp)
    xs, ys = [], []
    lam = 0
    while len(xs) < deg + 1:
        lam += 1
        den = _shifted_det(Mp, Fraction(lam))
        if den == 0:
            continue
        xs.append(Fraction(lam))
        ys.append(_shifted_det(M, Fraction(lam)) / den)
    # Neville evaluation at 0 of the interpolating polynomial
    vals = list(ys)
    for k in range(1, len(xs)):
        for i in range(len(xs) - k):
            vals[i] = (xs[i + k] * vals[i] - xs[i] * vals[i + 1]) / (xs[i + k] - xs[i])
    return vals[0]


def macaulay_resultant(forms: Sequence[MultiPoly], degrees: Sequence[int] | None = None,
                       seed: int = 0, retries: int = DEFAULT_RETRIES) -> Fraction:
    """Exact resultant of homogeneous forms (one per variable).

    When the denominator minor is singular the whole system is moved by a
    seeded determinant-one integer change of coordinates, which leaves the
    resultant value unchanged, and the computation is repeated.  If every
    frame fails, the value is taken from the perturbed system
    F_i - lam x_i^{d_i} at lam = 0 (see ``perturbed_resultant``).
    """
    forms = list(forms)
    if degrees is None:
        degrees = [F.degree() for F in forms]
    _check(forms, degrees)
    rng = random.Random(seed)
    current = forms
    for attempt in range(retries + 1):
        M, Mp, _ = macaulay_matrices(current, degrees)
        den = fraction_free_det(Mp)
        if den != 0:
            num = fraction_free_det(M)
            return num / den
        if attempt < retries:
            A = random_unimodular(len(forms), rng)
            current = [linear_change(F, A) for F in forms]
    M, Mp, _ = macaulay_matrices(forms, degrees)
    return perturbed_resultant(M, Mp)
