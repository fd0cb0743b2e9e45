"""Exact scalars, polynomials, linear algebra and resultants over Q."""
from .linalg import RatMatrix, fraction_free_det, nullspace, rank, rref, solve, solve_integer_square
from .poly import (V4, XYZW, MultiPoly, Q, format_poly, monomials, osculation_forms,
                   parse_poly, partial_derivative, poly_eval, restrict_to_line)
from .resultant import linear_change, macaulay_resultant, random_unimodular
from .unipoly import (UniPoly, complex_roots, gcd_many, square_free_part, sturm_distinct_real_roots,
                      uni_gcd)

__all__ = [
    "MultiPoly", "UniPoly", "RatMatrix", "Q", "XYZW", "V4",
    "poly_eval", "partial_derivative", "osculation_forms", "restrict_to_line",
    "parse_poly", "format_poly", "monomials",
    "sturm_distinct_real_roots", "uni_gcd", "gcd_many", "square_free_part", "complex_roots",
    "fraction_free_det", "rref", "rank", "nullspace", "solve", "solve_integer_square",
    "macaulay_resultant", "linear_change", "random_unimodular",
]
