"""Fit the sign-class constant C_W on seeded reference runs.

For each run the number of nonempty sign classes is divided by D^4, where D
is the planned first-stage degree.  Each stage at most doubles the number of
classes, so the ratio never exceeds 2^ceil(log2 r) / r < 2; the constant
frozen in incidence4d.partition is that cap, and the fit checks that no
observed ratio comes near it.
"""
import argparse
import random

from incidence4d.constructions import elekes4d
from incidence4d.partition import WARREN_CONSTANT, build_partition, choose_degree


def reference_sets(seed: int):
    cfg, _ = elekes4d(2, 2)
    yield cfg.name, cfg.points, cfg.n
    rng = random.Random(seed)
    pts = {tuple(rng.randint(0, 1000) for _ in range(4)) for _ in range(600)}
    yield "random600", sorted(pts), 100


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=3)
    args = ap.parse_args()
    worst = 0.0
    for seed in range(args.seeds):
        for name, pts, n in reference_sets(seed):
            plan = choose_degree(len(pts), n)
            res = build_partition(pts, max(plan.r, 2), seed=seed)
            ratio = len(res.sign_classes) / plan.D ** 4
            worst = max(worst, ratio)
            print(f"{name:24s} seed={seed} D={plan.D} classes={len(res.sign_classes)} ratio={ratio:.4f}")
    print(f"max observed ratio {worst:.4f}; frozen C_W = {WARREN_CONSTANT}")
    if worst > WARREN_CONSTANT:
        raise SystemExit("observed ratio exceeds the frozen constant")


if __name__ == "__main__":
    main()
