import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from incidence4d.exactmath.poly import MultiPoly, monomials

small_rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)
points4 = st.tuples(small_rationals, small_rationals, small_rationals, small_rationals)
nonzero_dirs = st.tuples(*[st.integers(-3, 3)] * 4).filter(any)


def random_poly(rng: random.Random, degree: int, density: float = 1.0, coeff: int = 5,
                exact_degree: bool = True) -> MultiPoly:
    """Random integer-coefficient polynomial in x, y, z, w of the given degree."""
    terms = {}
    for e in monomials(4, degree):
        if rng.random() < density:
            c = rng.randint(-coeff, coeff)
            if c:
                terms[e] = c
    if exact_degree and not any(sum(e) == degree for e in terms):
        terms[(degree, 0, 0, 0)] = 1
    return MultiPoly(terms)


def through_point(f: MultiPoly, p) -> MultiPoly:
    """f minus its value at p, so p lies on the zero set."""
    return f - f(p)


@pytest.fixture
def rng():
    return random.Random(12345)


def F(x) -> Fraction:
    return Fraction(x)
