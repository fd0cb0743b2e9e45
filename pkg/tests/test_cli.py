import csv
import io
import json
import subprocess
import sys

import pytest

from incidence4d.cli import ExperimentSpec, _int_range, run, run_sweep
from incidence4d.constructions import elekes4d, elekes2d
from incidence4d.io import config_from_json, config_to_json, save_config


def call(capsys, *argv):
    code = run(list(argv))
    return code, capsys.readouterr().out


def test_generate_elekes4d(capsys, tmp_path):
    pred_path = tmp_path / "pred.json"
    code, out = call(capsys, "generate", "elekes4d", "--k", "3", "--l", "2", "--prediction", str(pred_path))
    assert code == 0
    cfg = config_from_json(json.loads(out))
    assert (cfg.m, cfg.n) == (5184, 1728)
    assert json.loads(pred_path.read_text())["I"] == 3 ** 4 * 2 ** 6


def test_verify_bound_lead_ratio(capsys, tmp_path):
    path = tmp_path / "cfg.json"
    save_config(elekes4d(2, 1)[0], path)
    code, out = call(capsys, "verify-bound", "--in", str(path), "--c", "0", "--A", "1")
    assert code == 0
    assert json.loads(out)["lead_ratio"] == pytest.approx(8 ** -0.4, abs=1e-6)


def test_missing_file_gives_error_json(capsys, tmp_path):
    code, out = call(capsys, "count", "--in", str(tmp_path / "missing.json"))
    assert code != 0
    err = json.loads(out)
    assert err["error"] == "ConfigError" and "missing.json" in err["message"]


def test_bad_json_and_bad_poly(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, out = call(capsys, "count", "--in", str(path))
    assert code == 1 and json.loads(out)["error"] == "ConfigError"
    code, out = call(capsys, "cert", "--poly", "x*w - y*z", "--point", "1,2")
    assert code == 1 and "error" in json.loads(out)
    code, out = call(capsys, "cert", "--poly", "x - 1", "--point", "0,0,0,0")
    assert code == 1 and json.loads(out)["error"] == "NotOnVarietyError"


def test_duplicate_lines_rejected(capsys, tmp_path):
    data = config_to_json(elekes2d(1, 1)[0])
    data["lines"].append(dict(data["lines"][0]))
    path = tmp_path / "dup.json"
    path.write_text(json.dumps(data))
    code, out = call(capsys, "count", "--in", str(path))
    assert code == 1 and "error" in json.loads(out)


def test_unknown_subcommand_is_nonzero(capsys):
    assert run(["nonsense"]) != 0


@pytest.mark.parametrize("family,k,l", [("elekes4d", 1, 1), ("elekes4d", 2, 1), ("elekes3d", 2, 1),
                                        ("elekes2d", 2, 2), ("packing", 2, 1)])
def test_generate_count_round_trip(capsys, tmp_path, family, k, l):
    pred_path, cfg_path = tmp_path / "pred.json", tmp_path / "cfg.json"
    code, out = call(capsys, "generate", family, "--k", str(k), "--l", str(l), "--H", "2",
                     "--prediction", str(pred_path))
    assert code == 0
    cfg_path.write_text(out)
    for method in ("naive", "grouped"):
        code, out = call(capsys, "count", "--in", str(cfg_path), "--method", method)
        (record,) = list(csv.DictReader(io.StringIO(out)))
        assert int(record["I"]) == json.loads(pred_path.read_text())["I"]


def test_cert_output_shape(capsys):
    code, out = call(capsys, "cert", "--poly", "w - x^3", "--point", "0,1,2,0", "--point", "1,0,0,1")
    assert code == 0
    certs = json.loads(out)
    assert [c["flat"] for c in certs] == [True, False]
    assert all(len(c["pi_values"]) == 9 and c["flecnode"] == "n/a" for c in certs)
    assert all(c["u_resultant_zero"] in (True, False) for c in certs)
    code, out = call(capsys, "cert", "--poly", "x^4 + y^4 + z^4 + w^4 - 1", "--point", "1,0,0,0")
    assert json.loads(out)[0]["flecnode"] == "0"


def test_rich_and_params(capsys, tmp_path):
    path = tmp_path / "cfg.json"
    save_config(elekes2d(2, 1)[0], path)
    code, out = call(capsys, "rich", "--in", str(path), "--k", "2", "3")
    table = json.loads(out)["table"]
    assert code == 0 and [r["k"] for r in table] == [2, 3]
    code, out = call(capsys, "params", "--in", str(path))
    assert code == 0 and out.startswith("name,m,n,I,s,")


def test_partition_command(capsys, tmp_path):
    path = tmp_path / "cfg.json"
    save_config(elekes2d(1, 1)[0], path)
    code, out = call(capsys, "partition", "--in", str(path), "--seed", "2")
    rep = json.loads(out)
    assert code == 0
    assert sum(rep["summands"].values()) == rep["I"]


def test_sweep_is_deterministic_and_ordered(capsys):
    argv = ["sweep", "elekes4d", "--k", "1..2", "--l", "1", "--measure", "count"]
    code, first = call(capsys, *argv)
    code2, second = call(capsys, *argv, "--workers", "2")
    assert code == code2 == 0 and first == second
    assert [int(r["I"]) for r in csv.DictReader(io.StringIO(first))] == [1, 16]


def test_int_range_and_spec_cells():
    assert _int_range("1..3,5") == [1, 2, 3, 5]
    spec = ExperimentSpec("elekes2d", {"k": [1, 2], "l": [1]})
    assert spec.cells() == [{"k": 1, "l": 1}, {"k": 2, "l": 1}]
    assert run_sweep(spec).count("\n") == 3


def test_reports_are_byte_identical_across_processes(tmp_path):
    path = tmp_path / "cfg.json"
    save_config(elekes2d(1, 2)[0], path)
    argv = [sys.executable, "-m", "incidence4d.cli", "partition", "--in", str(path), "--seed", "4"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and a
