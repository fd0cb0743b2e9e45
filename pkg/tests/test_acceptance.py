"""Acceptance criteria 1-12, one PASS/FAIL line each (run with -s, or see the uncaptured lines)."""
import itertools
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np
import pytest
import sympy

from algebra_samples import flat_sample, point_on, quartic_with_line, quartic_with_plane, rotated_flat_line
from conftest import random_poly
from incidence4d.algcrit import (flatness_certificate, flecnode_eval, is_flat_line,
                                 is_singular, osculating_directions, second_fundamental_form,
                                 tangent_constant_on_line, u_resultant_identically_zero)
from incidence4d.constructions import elekes2d, elekes3d, elekes4d, hyperplane_packing
from incidence4d.errors import EliminationError
from incidence4d.exactmath import MultiPoly, restrict_to_line, sturm_distinct_real_roots
from incidence4d.geom import axis_line, canonicalize_line, incidence_count, rich_points
from incidence4d.partition import WARREN_CONSTANT, two_stage_report
from incidence4d.structure import compute_q_hyperplane, compute_s, richpoints_bound_rhs

x, y, z, w = MultiPoly.gens()


@pytest.fixture
def report(capsys):
    def emit(number: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
        assert ok, detail
    return emit


# -- 1-4: constructions ------------------------------------------------------------------------


def test_criterion_01_elekes4d_exact_counts(report):
    t0 = time.time()
    bad = []
    for k, l in itertools.product(range(1, 5), range(1, 4)):
        cfg, _ = elekes4d(k, l)
        c = incidence_count(cfg, method="grouped")
        expected = (8 * k ** 4 * l ** 3, k ** 3 * l ** 6, k ** 4 * l ** 6)
        if (cfg.m, cfg.n, c.total) != expected or set(c.per_line) != {k}:
            bad.append((k, l))
    elapsed = time.time() - t0
    report(1, not bad and elapsed <= 60, f"12 cells exact, per-line tally k, {elapsed:.1f}s; mismatches {bad}")


def test_criterion_02_leading_ratio(report):
    target = 8 ** -0.4
    worst = 0.0
    for k, l in itertools.product(range(1, 5), range(1, 4)):
        cfg, _ = elekes4d(k, l)
        I = incidence_count(cfg, method="grouped").total
        worst = max(worst, abs(I / (cfg.m ** 0.4 * cfg.n ** 0.8) - target))
    report(2, worst <= 1e-12, f"max |ratio - 8^(-2/5)| = {worst:.2e}")


def test_criterion_03_lower_dimensional_ratios(report):
    worst3 = worst2 = 0.0
    for k, l in itertools.product(range(1, 4), range(1, 4)):
        c3, _ = elekes3d(k, l)
        I3 = incidence_count(c3, method="grouped").total
        worst3 = max(worst3, abs(I3 / (c3.m ** 0.5 * c3.n ** 0.75) - 0.5))
        c2, _ = elekes2d(k, l)
        I2 = incidence_count(c2, method="grouped").total
        worst2 = max(worst2, abs(I2 / (c2.m ** (2 / 3) * c2.n ** (2 / 3)) - 2 ** (-2 / 3)))
    report(3, max(worst3, worst2) <= 1e-12, f"3D deviation {worst3:.2e}, 2D deviation {worst2:.2e}")


def test_criterion_04_packing_ratio(report):
    off = []
    for H, k, l in itertools.product(range(1, 4), range(1, 3), range(1, 3)):
        cfg, _ = hyperplane_packing(H, k, l)
        I = incidence_count(cfg, method="grouped").total
        q = compute_q_hyperplane(cfg.lines)[0]
        ratio = I / (cfg.m ** 0.5 * cfg.n ** 0.5 * q ** 0.25)
        if abs(ratio - 0.5) > 1e-12:
            off.append(((H, k, l), q, round(ratio, 4)))
    report(4, not off, f"cells off 1/2 (cell, measured q, ratio): {off}")


# -- 5: structural parameters ------------------------------------------------------------------------


def _int_lines(lines):
    den = 1
    for l in lines:
        for c in l.base:
            den = den * c.denominator // np.gcd(den, c.denominator)
    B = np.array([[int(c * den) for c in l.base] for l in lines], dtype=np.int64)
    D = np.array([l.dir for l in lines], dtype=np.int64)
    return B, D


def _normals(u, v):
    """The four 3x3-minor functionals: x is in span(u, v) iff all vanish (u, v independent)."""
    out = []
    for drop in range(4):
        cols = [c for c in range(4) if c != drop]
        n = np.zeros(4, dtype=np.int64)
        n[cols] = np.cross(u[cols], v[cols])
        out.append(n)
    return np.array(out)


def pair_scan_s(lines) -> int:
    """Brute force over coplanar pairs: lines inside the 2-flat each pair spans."""
    B, D = _int_lines(lines)
    n = len(lines)
    best = 1 if n else 0
    for i in range(n):
        covered = np.zeros(n, dtype=bool)
        covered[i] = True
        for j in range(i + 1, n):
            if covered[j]:
                continue
            gap = B[j] - B[i]
            if np.linalg.matrix_rank(np.array([D[i], D[j], gap], dtype=float)) > 2:
                continue  # skew
            span = [D[i], D[j] if np.linalg.matrix_rank(np.array([D[i], D[j]], dtype=float)) == 2 else gap]
            N = _normals(*span)
            inside = ~np.any(D @ N.T, axis=1) & ~np.any((B - B[i]) @ N.T, axis=1)
            covered |= inside
            best = max(best, int(inside.sum()))
    return best


def test_criterion_05_structural_parameters(report):
    cells = [(k, l) for l in (1, 2, 3) for k in range(1, 9) if k ** 3 * l ** 6 <= 600]
    s_bad, q_bad, oracle_bad = [], [], []
    for k, l in cells:
        cfg, _ = elekes4d(k, l)
        s = compute_s(cfg.lines)[0]
        q = compute_q_hyperplane(cfg.lines)[0]
        if s > k * l ** 2:
            s_bad.append(((k, l), s))
        if q > 4 * k * l ** 4:
            q_bad.append(((k, l), q, 4 * k * l ** 4))
        if s != pair_scan_s(cfg.lines):
            oracle_bad.append((k, l))
    report(5, not (s_bad or q_bad or oracle_bad),
           f"{len(cells)} cells; s > k l^2: {s_bad}; q > 4 k l^4 (cell, q, cap): {q_bad}; "
           f"s differs from pair scan: {oracle_bad}")


# -- 6-10: algebraic criteria ----------------------------------------------------------------------------


def test_criterion_06_crossing_budget(report):
    rng = random.Random(606)
    t0 = time.time()
    bad, done = [], 0
    t = sympy.symbols("t")
    while done < 200:
        f = random_poly(rng, rng.randint(1, 6), density=0.6)
        d = [rng.randint(-3, 3) for _ in range(4)]
        if not any(d):
            continue
        line = canonicalize_line([rng.randint(-4, 4) for _ in range(4)], d)
        u = restrict_to_line(f, line.base, line.dir)
        if u.is_zero():
            continue
        done += 1
        count = sturm_distinct_real_roots(u) if u.degree() > 0 else 0
        oracle = len(set(sympy.real_roots(sympy.Poly(list(reversed(u.coeffs)), t)))) if u.degree() > 0 else 0
        if count > f.degree() or count != oracle:
            bad.append((str(f), line))
    elapsed = time.time() - t0
    report(6, not bad and elapsed <= 30, f"200 pairs, {len(bad)} over budget or off the oracle, {elapsed:.1f}s")


def test_criterion_07_flecnode_vanishing(report):
    rng = random.Random(707)
    nonzero = 0
    for _ in range(10):
        f, line = quartic_with_line(rng)
        nonzero += sum(flecnode_eval(f, line.at(Fraction(t, 3))) != 0 for t in (-4, -1, 0, 2, 5))
    report(7, nonzero == 0, f"10 quartics x 5 points, {nonzero} nonzero values")


def test_criterion_08_cubic_ruledness(report):
    rng = random.Random(808)
    failures, worst, done = 0, 0.0, 0
    while done < 20:
        f, p = point_on(random_poly(rng, 3), rng)
        if is_singular(f, p):
            continue
        done += 1
        rep = osculating_directions(f, p)
        if rep.infinite_flag:
            continue
        if not rep.contained_directions:
            failures += 1
        else:
            worst = max(worst, min(rep.contained_residuals))
    report(8, failures == 0 and worst <= 1e-8, f"20 cubics, {failures} without a contained direction, "
                                               f"worst residual {worst:.1e}")


def test_criterion_09_u_resultant_dichotomy(report):
    rng = random.Random(909)
    samples = []
    for i in range(30):
        kind = i % 5
        if kind == 0:
            f, p = point_on(MultiPoly.linear_form([rng.randint(1, 3) for _ in range(4)], rng.randint(-3, 3)), rng)
        elif kind == 4:
            f, p = quartic_with_plane(rng, degree=rng.choice((3, 4)))
        else:
            f, p = point_on(random_poly(rng, kind + 1), rng)
        samples.append((f, p))
    agree = disagree = skipped = 0
    for i, (f, p) in enumerate(samples):
        try:
            infinite = osculating_directions(f, p, seed=i).infinite_flag
        except EliminationError:
            skipped += 1
            continue
        if u_resultant_identically_zero(f, p, seed=i) == infinite:
            agree += 1
        else:
            disagree += 1
    report(9, disagree == 0 and agree >= 25, f"{agree} agree, {disagree} disagree, {skipped} solver failures")


def test_criterion_10_flatness_equivalence(report):
    rng = random.Random(1010)
    mismatches, done, flat = 0, 0, 0
    while done < 50:
        degree = 2 + done % 4
        f, p = flat_sample(rng, degree) if done % 2 == 0 else point_on(random_poly(rng, degree), rng)
        c = flatness_certificate(f, p)
        if c.singular or c.axis_degenerate or not c.pi_conclusive:
            continue
        done += 1
        sff = second_fundamental_form(f, p)
        pis_zero = all(v == 0 for v in c.pi_values)
        mismatches += pis_zero != (not any(v for row in sff for v in row))
        flat += pis_zero
    lines = [(w - x ** 3, axis_line(1)), (w - x ** 3, axis_line(2)), (x, axis_line(3))]
    lines += [rotated_flat_line(seed) for seed in range(5)]
    not_constant = sum(not (is_flat_line(f, l) is True and tangent_constant_on_line(f, l)) for f, l in lines)
    report(10, mismatches == 0 and not_constant == 0,
           f"50 points ({flat} flat), {mismatches} mismatches; {len(lines)} flat lines, "
           f"{not_constant} with a moving tangent space")


# -- 11-12: partition and rich points -------------------------------------------------------------------


def _partition_run(seed: int) -> dict:
    cfg, _ = elekes4d(2, 2)
    return two_stage_report(cfg, seed=seed)


def test_criterion_11_partition_budgets(report):
    cfg, _ = elekes4d(2, 2)
    seeds = [0, 1, 2, 3, 4]
    with ProcessPoolExecutor(min(len(seeds), os.cpu_count() or 1)) as pool:
        reports = list(pool.map(_partition_run, seeds))
    problems = []
    for seed, rep in zip(seeds, reports):
        s, D = rep["summands"], rep["plan"]["D"]
        stages = len(rep["stages"])
        checks = {
            "identity": s["I00"] + s["I0p"] + s["Ipp"] == rep["I"] == 1024,
            "I0p": s["I0p"] <= cfg.n * D,
            "class fraction": rep["max_class_fraction"] <= 0.55 ** stages,
            "sign classes": rep["sign_classes"] <= WARREN_CONSTANT * D ** 4,
        }
        problems += [(seed, k) for k, ok in checks.items() if not ok]
    worst = max(r["max_class_fraction"] for r in reports)
    report(11, not problems, f"5 seeds, degrees {[r['degree'] for r in reports]}, worst class fraction "
                             f"{worst:.4f}, classes {[r['sign_classes'] for r in reports]}; failed {problems}")


def _rich_oracle(lines) -> int:
    """Intersect every pair by solving base_i + s dir_i = base_j + t dir_j directly."""
    meets = {}
    for i, j in itertools.combinations(range(len(lines)), 2):
        a, b = lines[i], lines[j]
        rhs = [bj - ai for ai, bj in zip(a.base, b.base)]
        sol = None
        for r1, r2 in itertools.combinations(range(4), 2):
            det = a.dir[r1] * -b.dir[r2] - (-b.dir[r1]) * a.dir[r2]
            if det:
                s_ = Fraction(rhs[r1] * -b.dir[r2] - (-b.dir[r1]) * rhs[r2], det)
                t_ = Fraction(a.dir[r1] * rhs[r2] - rhs[r1] * a.dir[r2], det)
                sol = (s_, t_)
                break
        if sol is None:
            continue  # parallel
        s_, t_ = sol
        p = tuple(ai + s_ * di for ai, di in zip(a.base, a.dir))
        if p == tuple(bi + t_ * di for bi, di in zip(b.base, b.dir)):
            meets.setdefault(p, set()).update((i, j))
    return sum(len(v) >= 2 for v in meets.values())


def _random_grid_lines(seed: int, n: int):
    rng = random.Random(seed)
    out = set()
    while len(out) < n:
        d = [rng.randint(-1, 1) for _ in range(4)]
        if any(d):
            out.add(canonicalize_line([rng.randint(-2, 2) for _ in range(4)], d))
    return sorted(out)


def test_criterion_12_rich_points(report):
    configs = [elekes2d(2, 1)[0].lines, elekes2d(3, 1)[0].lines, elekes2d(2, 2)[0].lines, elekes3d(1, 1)[0].lines,
               elekes3d(2, 1)[0].lines, elekes4d(2, 1)[0].lines, hyperplane_packing(2, 1, 2)[0].lines]
    configs += [_random_grid_lines(seed, 40) for seed in range(3)]
    rows, bad = [], 0
    for lines in configs:
        measured, _ = rich_points(lines, 2)
        bad += measured != _rich_oracle(lines)
        s = compute_s(lines)[0]
        q = compute_q_hyperplane(lines)[0]
        rhs = richpoints_bound_rhs(len(lines), q, s, 2)["total"]
        rows.append(f"n={len(lines)} m2={measured} rhs={rhs:.1f}")
    report(12, bad == 0, f"10 configs, {bad} mismatches with the pairwise oracle; " + "; ".join(rows))
