import random
from fractions import Fraction

import pytest

from algebra_samples import (flat_sample, point_on, quartic_with_line, quartic_with_plane,
                             random_line, rotated_flat_line)
from conftest import random_poly
from incidence4d.algcrit import (SINGULAR_LINE, flat_polynomials, flatness_certificate,
                                 flecnode_eval, is_flat_line, is_singular, osculating_directions,
                                 second_fundamental_form, singular_count_on_line,
                                 tangent_constant_on_line, u_resultant_eval,
                                 u_resultant_identically_zero, u_resultant_test)
from incidence4d.errors import EliminationError, NotOnVarietyError, ZeroFormsError
from incidence4d.exactmath import MultiPoly, restrict_to_line
from incidence4d.geom import axis_line, canonicalize_line

x, y, z, w = MultiPoly.gens()
ORIGIN = (0, 0, 0, 0)
QUADRIC = x * w - y * z


def test_is_singular_examples():
    assert is_singular(x ** 2 + y ** 2 + z ** 2 + w ** 2, ORIGIN)
    assert not is_singular(x, ORIGIN)
    assert is_singular(QUADRIC, ORIGIN)
    with pytest.raises(NotOnVarietyError):
        is_singular(x - 1, ORIGIN)


def test_singular_count_examples():
    assert singular_count_on_line(QUADRIC, axis_line(0)) == 1
    assert singular_count_on_line(x * y, axis_line(2)) == SINGULAR_LINE
    assert singular_count_on_line(x, axis_line(1)) == 0
    with pytest.raises(NotOnVarietyError):
        singular_count_on_line(x, axis_line(0))


# -- osculating directions ---------------------------------------------------------------


def test_osculating_hyperplane_is_infinite():
    assert osculating_directions(x + y + z + w, (1, -1, 0, 0)).infinite_flag


def test_osculating_quadric_is_infinite():
    assert osculating_directions(QUADRIC, (1, 1, 1, 1)).infinite_flag


def test_cubic_has_contained_direction():
    rng = random.Random(77)
    f, p = point_on(random_poly(rng, 3), rng)
    rep = osculating_directions(f, p)
    assert not rep.infinite_flag and 1 <= len(rep.directions) <= 6
    assert rep.contained_directions and max(rep.contained_residuals) <= 1e-8


# -- flecnode ------------------------------------------------------------------------------


def test_flecnode_vanishes_along_contained_line():
    rng = random.Random(1)
    f, line = quartic_with_line(rng)
    for t in range(5):
        assert flecnode_eval(f, line.at(Fraction(t, 2))) == 0


def test_flecnode_fermat_quartic_vanishes():
    # pure powers of v0 in F_1..F_3 leave v = (0, 1, zeta, 0), zeta^4 = -1, as a common root
    assert flecnode_eval(x ** 4 + y ** 4 + z ** 4 + w ** 4 - 1, (1, 0, 0, 0)) == 0


def test_flecnode_nonzero_on_generic_quartic():
    rng = random.Random(5)
    f, p = point_on(random_poly(rng, 4), rng)
    assert flecnode_eval(f, p) != 0
    # no order-four direction: every order-three direction leaves F_4 nonzero
    rep = osculating_directions(f, p)
    assert not rep.infinite_flag and not rep.contained_directions


def test_flecnode_needs_degree_four():
    with pytest.raises(ZeroFormsError):
        flecnode_eval(QUADRIC, (1, 1, 1, 1))


# -- u-resultant ----------------------------------------------------------------------------


def test_u_resultant_generic_cubic_nonzero():
    rng = random.Random(8)
    f, p = point_on(random_poly(rng, 3), rng)
    assert not osculating_directions(f, p).infinite_flag
    assert u_resultant_eval(f, p, (3, -7, 11, 2)) != 0


def test_u_resultant_vanishes_with_plane_through_point():
    rng = random.Random(4)
    f, p = quartic_with_plane(rng, degree=3)
    assert all(u_resultant_eval(f, p, [rng.randint(-99, 99) for _ in range(4)]) == 0 for _ in range(5))
    assert osculating_directions(f, p).infinite_flag


def test_u_resultant_zero_u():
    rng = random.Random(8)
    f, p = point_on(random_poly(rng, 3), rng)
    assert u_resultant_eval(f, p, (0, 0, 0, 0)) == 0


def test_u_resultant_needs_degree_three():
    with pytest.raises(ZeroFormsError):
        u_resultant_eval(QUADRIC, (1, 1, 1, 1), (1, 2, 3, 4))


def test_u_identically_zero_examples():
    assert u_resultant_identically_zero(x + y + z + w, ORIGIN)
    assert u_resultant_identically_zero(QUADRIC, (1, 1, 1, 1))
    rng = random.Random(21)
    f, p = point_on(random_poly(rng, 4), rng)
    res = u_resultant_test(f, p)
    assert not res.identically_zero and res.trials == 1


def test_u_test_reports_failure_bound():
    rng = random.Random(4)
    f, p = quartic_with_plane(rng, degree=3)
    res = u_resultant_test(f, p, trials=5)
    assert res.identically_zero and 0 < res.failure_bound < 1e-20


# -- flatness ---------------------------------------------------------------------------------


def test_flat_polynomials_of_hyperplane_vanish():
    assert all(P.is_zero() for P in flat_polynomials(x + y + z + w))


def test_flat_polynomials_cubic_graph():
    pis = flat_polynomials(w - x ** 3)
    x_slice = pis[:3]
    assert all(P((0, Fraction(a), Fraction(b), Fraction(a * b))) == 0 for P in x_slice for a in range(3)
               for b in range(3))
    assert any(P((1, 0, 0, 1)) != 0 for P in pis)


def test_flat_polynomial_degrees():
    rng = random.Random(6)
    f = random_poly(rng, 4, density=0.5)
    assert all(P.degree() <= 3 * 4 - 4 for P in flat_polynomials(f))


def test_certificate_examples():
    c = flatness_certificate(w - x ** 3, (0, 5, 7, 0))
    assert c.is_flat and not any(v for row in c.sff_matrix for v in row)
    assert not flatness_certificate(w - x ** 3, (1, 0, 0, 1)).is_flat
    s = flatness_certificate(x ** 2 + y ** 2 + z ** 2 + w ** 2 - 1, (1, 0, 0, 0))
    assert not s.is_flat and s.axis_degenerate


def test_flat_line_examples():
    assert is_flat_line(w - x ** 3, axis_line(1)) is True
    assert is_flat_line(QUADRIC, axis_line(0)) is False
    assert is_flat_line(x * y, axis_line(2)) == SINGULAR_LINE


def test_tangent_constant_examples():
    assert tangent_constant_on_line(w - x ** 3, axis_line(1))
    # grad(xw - yz) = (0, 0, 0, t) along the x-axis: one projective direction
    assert tangent_constant_on_line(QUADRIC, axis_line(0))
    assert not tangent_constant_on_line(QUADRIC, canonicalize_line((0, 0, 1, 1), (1, 1, 0, 0)))
    rng = random.Random(3)
    for _ in range(5):
        d = [0] + [rng.randint(-2, 2) for _ in range(3)]
        if any(d):
            assert tangent_constant_on_line(x, canonicalize_line((0, 1, 2, 3), d))


def test_flat_lines_in_generic_frames():
    for seed in range(4):
        f, line = rotated_flat_line(seed)
        assert restrict_to_line(f, line.base, line.dir).is_zero()
        assert is_flat_line(f, line) is True
        assert tangent_constant_on_line(f, line)
        count = singular_count_on_line(f, line)
        assert count != SINGULAR_LINE and count <= f.degree() - 1


def test_flat_sample_points_are_flat():
    rng = random.Random(10)
    for degree in (2, 3, 4):
        f, p = flat_sample(rng, degree)
        c = flatness_certificate(f, p)
        assert c.pi_conclusive and c.is_flat
        assert second_fundamental_form(f, p) == c.sff_matrix


# -- properties over constructed samples ----------------------------------------------------------


def _flatness_samples(count: int):
    rng = random.Random(2024)
    out = []
    while len(out) < count:
        degree = 2 + len(out) % 4
        f, p = flat_sample(rng, degree) if len(out) % 2 == 0 else point_on(random_poly(rng, degree), rng)
        c = flatness_certificate(f, p)
        if not c.singular and not c.axis_degenerate and c.pi_conclusive:
            out.append((f, p, c))
    return out


def test_flatness_equivalence():
    samples = _flatness_samples(50)
    flat = 0
    for f, p, c in samples:
        pis_zero = all(v == 0 for v in c.pi_values)
        sff = second_fundamental_form(f, p)
        sff_zero = not any(v for row in sff for v in row)
        assert pis_zero == sff_zero == c.is_flat
        flat += c.is_flat
    assert 0 < flat < len(samples)


def test_flecnode_vanishes_on_contained_lines():
    rng = random.Random(99)
    for _ in range(10):
        f, line = quartic_with_line(rng)
        assert f.degree() == 4
        for t in (-2, -1, 0, Fraction(1, 2), 3):
            assert flecnode_eval(f, line.at(Fraction(t))) == 0


def _u_samples():
    rng = random.Random(31)
    out = []
    for i in range(30):
        kind = i % 5
        if kind == 0:
            f = MultiPoly.linear_form([rng.randint(-3, 3) for _ in range(4)], rng.randint(-3, 3))
            f, p = point_on(f if not f.is_zero() and f.degree() == 1 else x + 2 * w, rng)
        elif kind == 1:
            f, p = point_on(random_poly(rng, 2, exact_degree=True), rng)
        elif kind == 2:
            f, p = point_on(random_poly(rng, 3, exact_degree=True), rng)
        elif kind == 3:
            f, p = point_on(random_poly(rng, 4, exact_degree=True), rng)
        else:
            f, p = quartic_with_plane(rng, degree=rng.choice((3, 4)))
        out.append((kind, f, p))
    return out


def test_u_resultant_dichotomy():
    infinite_kinds = set()
    for kind, f, p in _u_samples():
        if is_singular(f, p):
            continue
        try:
            rep = osculating_directions(f, p, seed=kind)
        except EliminationError:
            continue
        assert u_resultant_identically_zero(f, p, seed=kind) == rep.infinite_flag
        if rep.infinite_flag:
            infinite_kinds.add(kind)
        else:
            # finitely many osculating directions: at most six
            assert len(rep.directions) <= 6
    assert {0, 1, 4} <= infinite_kinds and not {2, 3} & infinite_kinds


def test_flat_lines_are_not_singular():
    instances = [(w - x ** 3, axis_line(1)), (w - x ** 3, axis_line(2)), (x, axis_line(1))]
    instances += [rotated_flat_line(seed) for seed in range(4, 8)]
    for f, line in instances:
        assert is_flat_line(f, line) is True
        count = singular_count_on_line(f, line)
        assert count != SINGULAR_LINE and count <= f.degree() - 1


def test_cubics_are_ruled():
    rng = random.Random(555)
    for _ in range(20):
        f, p = point_on(random_poly(rng, 3, exact_degree=True), rng)
        if is_singular(f, p):
            continue
        rep = osculating_directions(f, p)
        assert rep.infinite_flag or rep.contained_directions
        if not rep.infinite_flag:
            assert max(rep.contained_residuals) <= 1e-8


def test_random_line_helper_stays_canonical():
    rng = random.Random(0)
    for _ in range(20):
        line = random_line(rng)
        assert canonicalize_line(line.base, line.dir) == line
