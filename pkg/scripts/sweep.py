"""Measure every construction family on a small grid and write one CSV per family."""
import argparse
from pathlib import Path

from incidence4d.cli import ExperimentSpec, run_sweep

GRIDS = {
    "elekes4d": {"k": [1, 2, 3], "l": [1, 2]},
    "elekes3d": {"k": [1, 2, 3], "l": [1, 2, 3]},
    "elekes2d": {"k": [1, 2, 3], "l": [1, 2, 3]},
    "packing": {"H": [1, 2, 3], "k": [1, 2], "l": [1, 2]},
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results")
    ap.add_argument("--measure", default="params", choices=["count", "params"])
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for family, grid in GRIDS.items():
        csv = run_sweep(ExperimentSpec(family, grid, args.measure, workers=args.workers))
        (out / f"{family}_{args.measure}.csv").write_text(csv)
        print(csv)


if __name__ == "__main__":
    main()
