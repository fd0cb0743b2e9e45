"""Command-line front end: generate, measure, certify, partition and sweep."""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .constructions import GENERATORS
from .exactmath.poly import parse_poly
from .geom import incidence_count, rich_points
from .io import (INCIDENCE_COLUMNS, PARAMS_COLUMNS, dump_json, error_json, load_config,
                 parse_rational, point_certificate, write_csv, config_to_json)
from .partition import DEFAULT_DELTA, DEFAULT_RETRIES, two_stage_report
from .structure import BoundConstants, richpoints_bound_rhs, structural_params, verify_bound


@dataclass
class ExperimentSpec:
    """One sweep: a generator, a finite grid of its parameters and what to measure."""
    family: str
    grid: dict
    measure: str = "count"
    consts: BoundConstants = field(default_factory=BoundConstants)
    seed: int = 0
    quadric_budget: int | None = 0
    workers: int = 1

    def cells(self) -> list[dict]:
        keys = sorted(self.grid)
        return [dict(zip(keys, vals)) for vals in product(*(self.grid[k] for k in keys))]


def _int_range(text: str) -> list[int]:
    """'3' -> [3], '1..4' -> [1, 2, 3, 4], '1,3' -> [1, 3]."""
    out = []
    for part in text.split(","):
        if ".." in part:
            a, b = part.split("..")
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def _generate(family: str, k: int, l: int, H: int | None):
    if family not in GENERATORS:
        raise ValueError(f"unknown family {family!r}; choose from {sorted(GENERATORS)}")
    if family == "packing":
        return GENERATORS[family](H or 1, k, l)
    return GENERATORS[family](k, l)


def _consts(args) -> BoundConstants:
    return BoundConstants(c=args.c, A=args.A, a=args.a, c0=args.c0)


def _params_row(cfg, consts: BoundConstants, quadric_budget) -> dict:
    params = structural_params(cfg.lines, quadric_budget=quadric_budget) if cfg.n else None
    return verify_bound(cfg, consts, params=params)


def _measure_cell(spec: ExperimentSpec, cell: dict) -> dict:
    cfg, pred = _generate(spec.family, cell.get("k", 1), cell.get("l", 1), cell.get("H"))
    if spec.measure == "count":
        c = incidence_count(cfg, method="grouped")
        return {"name": cfg.name, "m": cfg.m, "n": cfg.n, "I": c.total,
                "max_per_line": max(c.per_line, default=0), "max_per_point": max(c.per_point, default=0)}
    if spec.measure == "params":
        return _params_row(cfg, spec.consts, spec.quadric_budget)
    if spec.measure == "partition":
        rep = two_stage_report(cfg, spec.consts, seed=spec.seed)
        return {"name": cfg.name, "m": cfg.m, "n": cfg.n, "I": rep["I"], "degree": rep["degree"],
                "sign_classes": rep["sign_classes"], "max_class_fraction": rep["max_class_fraction"],
                "P0": rep["P0"], "L0": rep["L0"], **rep["summands"],
                "violations": ";".join(rep["violations"])}
    raise ValueError(f"unknown measurement {spec.measure!r}")


SWEEP_COLUMNS = {
    "count": INCIDENCE_COLUMNS,
    "params": PARAMS_COLUMNS,
    "partition": ["name", "m", "n", "I", "degree", "sign_classes", "max_class_fraction",
                  "P0", "L0", "I00", "I0p", "Ipp", "violations"],
}


def run_sweep(spec: ExperimentSpec) -> str:
    cells = spec.cells()
    if spec.workers > 1:
        with ProcessPoolExecutor(spec.workers) as pool:
            rows = list(pool.map(_measure_cell, [spec] * len(cells), cells))
    else:
        rows = [_measure_cell(spec, c) for c in cells]
    return write_csv(rows, SWEEP_COLUMNS[spec.measure])


# -- subcommands ---------------------------------------------------------------------


def cmd_generate(args) -> str:
    cfg, pred = _generate(args.family, args.k, args.l, args.H)
    if args.prediction:
        with open(args.prediction, "w") as fh:
            fh.write(dump_json(pred.to_json()))
    return dump_json(config_to_json(cfg))


def cmd_count(args) -> str:
    cfg = load_config(args.input)
    c = incidence_count(cfg, method=args.method)
    return write_csv([{"name": cfg.name, "m": cfg.m, "n": cfg.n, "I": c.total,
                       "max_per_line": max(c.per_line, default=0),
                       "max_per_point": max(c.per_point, default=0)}], INCIDENCE_COLUMNS)


def cmd_params(args) -> str:
    cfg = load_config(args.input)
    return write_csv([_params_row(cfg, _consts(args), args.quadric_budget)], PARAMS_COLUMNS)


def cmd_verify_bound(args) -> str:
    cfg = load_config(args.input)
    return dump_json(verify_bound(cfg, _consts(args), quadric_budget=args.quadric_budget))


def cmd_rich(args) -> str:
    cfg = load_config(args.input)
    if not cfg.lines:
        raise ValueError("configuration has no lines")
    params = structural_params(cfg.lines, quadric_budget=args.quadric_budget)
    rows = []
    for k in args.k:
        count, _ = rich_points(cfg.lines, k)
        rhs = richpoints_bound_rhs(cfg.n, params.q, params.s, k, _consts(args))
        rows.append({"k": k, "m_ge_k": count, "rhs": rhs,
                     "ratio": count / rhs["total"] if rhs["total"] else 0.0})
    return dump_json({"name": cfg.name, "n": cfg.n, "q": params.q, "s": params.s, "table": rows})


def _parse_point(text: str) -> tuple:
    coords = [parse_rational(c) for c in text.split(",")]
    if len(coords) != 4:
        raise ValueError(f"point needs four coordinates: {text!r}")
    return tuple(coords)


def cmd_cert(args) -> str:
    f = parse_poly(args.poly)
    points = [_parse_point(p) for p in args.point]
    if not points:
        raise ValueError("give at least one --point")
    return dump_json([point_certificate(f, p, seed=args.seed, trials=args.trials) for p in points])


def cmd_partition(args) -> str:
    cfg = load_config(args.input)
    return dump_json(two_stage_report(cfg, _consts(args), seed=args.seed, second_stage=args.second_stage,
                                      c_star=args.c_star, delta=args.delta, retries=args.retries,
                                      crossings=not args.no_crossings))


def cmd_sweep(args) -> str:
    grid = {"k": _int_range(args.k), "l": _int_range(args.l)}
    if args.family == "packing":
        grid["H"] = _int_range(args.H or "1")
    spec = ExperimentSpec(args.family, grid, args.measure, _consts(args), args.seed,
                          args.quadric_budget, args.workers)
    return run_sweep(spec)


def _add_consts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--c", type=float, default=0.0, help="exponent of the subpolynomial factor")
    p.add_argument("--A", type=float, default=1.0, help="constant of the linear terms")
    p.add_argument("--a", type=float, default=1.0, help="regime threshold constant")
    p.add_argument("--c0", type=float, default=1.0, help="partition degree constant")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="incidence4d", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a lower-bound configuration as JSON")
    p.add_argument("family", choices=sorted(GENERATORS))
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--H", type=int, default=None, help="number of hyperplane copies (packing)")
    p.add_argument("--prediction", help="also write the closed-form prediction to this path")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("count", help="incidence CSV for a config")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--method", choices=["naive", "grouped"], default="grouped")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("params", help="structural parameters CSV")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--quadric-budget", type=int, default=None)
    _add_consts(p)
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("verify-bound", help="measured incidences against the bound")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--quadric-budget", type=int, default=0)
    _add_consts(p)
    p.set_defaults(func=cmd_verify_bound)

    p = sub.add_parser("rich", help="rich-point counts with the corresponding bound terms")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--k", type=int, nargs="+", default=[2, 3])
    p.add_argument("--quadric-budget", type=int, default=0)
    _add_consts(p)
    p.set_defaults(func=cmd_rich)

    p = sub.add_parser("cert", help="flatness, flecnode and u-resultant certificates")
    p.add_argument("--poly", required=True, help='e.g. "x*w - y*z"')
    p.add_argument("--point", action="append", default=[], help="comma-separated rationals")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=40)
    p.set_defaults(func=cmd_cert)

    p = sub.add_parser("partition", help="partition report with incidence split and budgets")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--second-stage", action="store_true")
    p.add_argument("--c-star", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    p.add_argument("--retries", type=int, default=DEFAULT_RETRIES)
    p.add_argument("--no-crossings", action="store_true")
    _add_consts(p)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("sweep", help="run one measurement over a parameter grid")
    p.add_argument("family", choices=sorted(GENERATORS))
    p.add_argument("--k", default="1..2")
    p.add_argument("--l", default="1")
    p.add_argument("--H", default=None)
    p.add_argument("--measure", choices=sorted(SWEEP_COLUMNS), default="count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--quadric-budget", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    _add_consts(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        out = args.func(args)
    except Exception as exc:  # every failure becomes machine-readable output
        print(error_json(exc))
        return 1
    sys.stdout.write(out)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
