"""JSON and CSV formats for configurations, reports and point certificates."""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .algcrit import flatness_certificate, flecnode_eval, u_resultant_test
from .errors import ConfigError, IncidenceError
from .exactmath.poly import MultiPoly, Q
from .geom import Config, canonicalize_line

INCIDENCE_COLUMNS = ["name", "m", "n", "I", "max_per_line", "max_per_point"]
PARAMS_COLUMNS = ["name", "m", "n", "I", "s", "q_hyp", "q_quad", "q_quad_exhaustive",
                  "lead_ratio", "st_ratio", "gk_ratio", "bound_ratio"]


def rat_str(x) -> str:
    x = Q(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(text) -> Fraction:
    if isinstance(text, bool):
        raise ConfigError(f"not a rational: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, str):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise ConfigError(f"not a rational: {text!r}")


# -- configs ------------------------------------------------------------------------


def config_to_json(cfg: Config) -> dict:
    return {
        "name": cfg.name,
        "points": [[rat_str(c) for c in p] for p in cfg.points],
        "lines": [{"base": [rat_str(c) for c in l.base], "dir": [int(d) for d in l.dir]}
                  for l in cfg.lines],
        "meta": cfg.meta,
    }


def config_from_json(data: dict) -> Config:
    """Parse a Config; duplicates are rejected, never merged."""
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    try:
        points = [tuple(parse_rational(c) for c in p) for p in data.get("points", [])]
        lines = []
        for entry in data.get("lines", []):
            base = [parse_rational(c) for c in entry["base"]]
            direction = [parse_rational(c) for c in entry["dir"]]
            lines.append(canonicalize_line(base, direction))
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    if any(len(p) != 4 for p in points):
        raise ConfigError("points need four coordinates")
    return Config(str(data.get("name", "config")), points, lines, dict(data.get("meta", {})))


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n"


def _json_default(o):
    if isinstance(o, Fraction):
        return rat_str(o)
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(f"not serializable: {type(o).__name__}")


def save_config(cfg: Config, path: str | Path) -> None:
    Path(path).write_text(dump_json(config_to_json(cfg)))


def load_config(path: str | Path) -> Config:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"no such file: {path}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    return config_from_json(data)


# -- CSV reports ----------------------------------------------------------------------


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def write_csv(rows: Iterable[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


# -- certificates ------------------------------------------------------------------------


def point_certificate(f: MultiPoly, p: Sequence, seed: int = 0, trials: int = 40) -> dict:
    """Flatness, flecnode and u-resultant verdicts at one point of Z(f)."""
    cert = flatness_certificate(f, p)
    out = cert.to_json()
    if f.degree() >= 4:
        out["flecnode"] = "0" if flecnode_eval(f, p, seed=seed) == 0 else "nonzero"
    else:
        out["flecnode"] = "n/a"
    out["u_resultant_zero"] = u_resultant_test(f, p, seed=seed, trials=trials).identically_zero
    return out


def error_json(exc: BaseException) -> str:
    kind = type(exc).__name__ if isinstance(exc, (IncidenceError, ValueError, OSError)) else "Error"
    return json.dumps({"error": kind, "message": str(exc)}, sort_keys=True)
