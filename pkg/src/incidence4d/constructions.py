"""Lattice-and-line families that realize the lower bounds, with closed-form predictions."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from itertools import product

from .errors import ResourceLimitError
from .geom import Config, Line4

DEFAULT_PAIR_CAP = 5 * 10 ** 9


@dataclass(frozen=True)
class ElekesParams:
    k: int
    l: int
    dim: int = 4
    H: int | None = None

    def __post_init__(self):
        if self.k < 1 or self.l < 1:
            raise ValueError("k and l must be positive")
        if self.dim not in (2, 3, 4):
            raise ValueError("dim must be 2, 3 or 4")
        if self.H is not None and self.H < 1:
            raise ValueError("H must be positive")


@dataclass
class Prediction:
    m: int
    n: int
    I: int
    q_claim: str = ""
    s_claim: str = ""
    per_line: int = 0
    ratio_target: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)


def _guard(m: int, n: int, cap: int | None):
    cap = DEFAULT_PAIR_CAP if cap is None else cap
    if m * n > cap:
        raise ResourceLimitError(f"m*n = {m * n} exceeds cap {cap}")


def elekes4d(k: int, l: int, cap: int | None = None) -> tuple[Config, Prediction]:
    """Grid {1..k} x {1..2kl}^3 with lines y=ax+b, z=cx+d, w=ex+f.

    Slopes run over 1..l and intercepts over 1..kl, so each line passes
    through exactly k grid points, one per x = 1..k.
    """
    ElekesParams(k, l)
    m, n = 8 * k ** 4 * l ** 3, k ** 3 * l ** 6
    _guard(m, n, cap)
    side = range(1, 2 * k * l + 1)
    points = [(x, y, z, w) for x in range(1, k + 1) for y in side for z in side for w in side]
    slopes, icpt = range(1, l + 1), range(1, k * l + 1)
    lines = [Line4(_ints((0, b, d, f)), (1, a, c, e))
             for a, c, e in product(slopes, repeat=3) for b, d, f in product(icpt, repeat=3)]
    pred = Prediction(m, n, k ** 4 * l ** 6, q_claim="O(k l^4)", s_claim="l^2",
                      per_line=k, ratio_target={"lead": 8 ** (-2 / 5)})
    return Config(f"elekes4d(k={k},l={l})", points, lines,
                  {"family": "elekes4d", "k": k, "l": l}), pred


def elekes3d(k: int, l: int, cap: int | None = None, w: int = 0,
             _check: bool = True) -> tuple[Config, Prediction]:
    """Grid {1..k} x {1..2kl}^2 inside the hyperplane w = const, lines y=ax+b, z=cx+d."""
    ElekesParams(k, l, 3)
    m, n = 4 * k ** 3 * l ** 2, k ** 2 * l ** 4
    if _check:
        _guard(m, n, cap)
    side = range(1, 2 * k * l + 1)
    points = [(x, y, z, w) for x in range(1, k + 1) for y in side for z in side]
    slopes, icpt = range(1, l + 1), range(1, k * l + 1)
    lines = [Line4(_ints((0, b, d, w)), (1, a, c, 0))
             for a, c in product(slopes, repeat=2) for b, d in product(icpt, repeat=2)]
    pred = Prediction(m, n, k ** 3 * l ** 4, s_claim="l", per_line=k,
                      ratio_target={"gk": 0.5})
    return Config(f"elekes3d(k={k},l={l})", points, lines,
                  {"family": "elekes3d", "k": k, "l": l}), pred


def elekes2d(k: int, l: int, cap: int | None = None) -> tuple[Config, Prediction]:
    """Grid {1..k} x {1..2kl} in the plane z = w = 0, lines y = ax + b."""
    ElekesParams(k, l, 2)
    m, n = 2 * k ** 2 * l, k * l ** 2
    _guard(m, n, cap)
    points = [(x, y, 0, 0) for x in range(1, k + 1) for y in range(1, 2 * k * l + 1)]
    lines = [Line4(_ints((0, b, 0, 0)), (1, a, 0, 0))
             for a in range(1, l + 1) for b in range(1, k * l + 1)]
    pred = Prediction(m, n, k ** 2 * l ** 2, per_line=k, ratio_target={"st": 2 ** (-2 / 3)})
    return Config(f"elekes2d(k={k},l={l})", points, lines,
                  {"family": "elekes2d", "k": k, "l": l}), pred


def hyperplane_packing(H: int, k: int, l: int, cap: int | None = None) -> tuple[Config, Prediction]:
    """H translated copies of elekes3d(k, l), one in each hyperplane w = 1..H."""
    ElekesParams(k, l, 3, H)
    m, n = 4 * H * k ** 3 * l ** 2, H * k ** 2 * l ** 4
    _guard(m, n, cap)
    points, lines = [], []
    for w in range(1, H + 1):
        cfg, _ = elekes3d(k, l, w=w, _check=False)
        points += cfg.points
        lines += cfg.lines
    q = k ** 2 * l ** 4
    pred = Prediction(m, n, H * k ** 3 * l ** 4, q_claim=str(q), per_line=k,
                      ratio_target={"packing": 0.5})
    return Config(f"packing(H={H},k={k},l={l})", points, lines,
                  {"family": "packing", "H": H, "k": k, "l": l}), pred


GENERATORS = {
    "elekes4d": elekes4d,
    "elekes3d": elekes3d,
    "elekes2d": elekes2d,
    "packing": hyperplane_packing,
}


def choose_elekes_params(m: int, n: int, max_k: int = 64, max_l: int = 64) -> tuple[int, int]:
    """(k, l) whose elekes4d sizes best match a target (m, n) in log distance."""
    best, best_cost = (1, 1), math.inf
    for k in range(1, max_k + 1):
        for l in range(1, max_l + 1):
            mp, np_ = 8 * k ** 4 * l ** 3, k ** 3 * l ** 6
            cost = abs(math.log(mp / m)) + abs(math.log(np_ / n))
            if cost < best_cost:
                best, best_cost = (k, l), cost
    return best


def _ints(t):
    from fractions import Fraction
    return tuple(Fraction(v) for v in t)
