"""Constructed hypersurfaces with known lines, flat points and osculating behaviour."""
import random
from fractions import Fraction

from conftest import random_poly
from incidence4d.algcrit import random_rational_rotation, transform_poly
from incidence4d.exactmath import MultiPoly, nullspace
from incidence4d.geom import Line4, canonicalize_line

x, y, z, w = MultiPoly.gens()


def random_line(rng: random.Random) -> Line4:
    d = [rng.randint(-2, 2) for _ in range(3)] + [rng.randint(1, 2)]
    rng.shuffle(d)
    return canonicalize_line([Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(4)], d)


def vanishing_forms(line: Line4) -> list[MultiPoly]:
    """Three independent affine linear forms cutting out the line."""
    out = []
    for n in nullspace([[Fraction(c) for c in line.dir]], ncols=4):
        out.append(MultiPoly.linear_form(n, -sum(a * b for a, b in zip(n, line.base))))
    return out


def quartic_with_line(rng: random.Random):
    line = random_line(rng)
    f = sum((random_poly(rng, 3, density=0.5, coeff=3) * lam for lam in vanishing_forms(line)), MultiPoly())
    return f, line


def quartic_with_plane(rng: random.Random, degree: int = 4):
    """f vanishing on a 2-flat through a rational point p, with p returned."""
    p = [Fraction(rng.randint(-2, 2)) for _ in range(4)]
    normals = [[rng.randint(-2, 2) for _ in range(4)] for _ in range(2)]
    lams = [MultiPoly.linear_form(n, -sum(a * b for a, b in zip(n, p))) for n in normals]
    f = sum((random_poly(rng, degree - 1, density=0.5, coeff=3) * lam for lam in lams), MultiPoly())
    return f, tuple(p)


def point_on(f: MultiPoly, rng: random.Random):
    """A rational point of Z(f), by shifting f with its value at a random point."""
    p = tuple(Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(4))
    return f - f(p), p


def flat_sample(rng: random.Random, degree: int):
    """f with a flat point p: f = L + L M + (cubic and higher terms at p)."""
    p = [Fraction(rng.randint(-2, 2)) for _ in range(4)]
    while True:
        normal = [rng.randint(1, 3) * rng.choice((-1, 1)) for _ in range(4)]
        if all(normal):
            break
    L = MultiPoly.linear_form(normal, -sum(a * b for a, b in zip(normal, p)))
    M = MultiPoly.linear_form([rng.randint(-2, 2) for _ in range(4)], rng.randint(-2, 2))
    shifted = [MultiPoly.linear_form([int(i == j) for j in range(4)], -p[i]) for i in range(4)]
    f = L + L * M
    if degree >= 3:
        u = shifted
        f = f + rng.randint(1, 3) * u[0] * u[1] * u[2] + rng.randint(-2, 2) * u[3] ** 3
        for k in range(4, degree + 1):
            f = f + u[rng.randrange(4)] ** k
    return f, tuple(p)


def rotated_flat_line(seed: int):
    """w - x^3 in a random rational frame, with its flat line (image of the y-axis)."""
    R = random_rational_rotation(seed)
    Rt = [[R[j][i] for j in range(4)] for i in range(4)]
    f = transform_poly(w - x ** 3, Rt)
    # x = R y maps the y-axis to base 0, direction R e_y
    line = canonicalize_line((0, 0, 0, 0), [R[i][1] for i in range(4)])
    return f, line
