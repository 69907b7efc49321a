from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path

import pytest

from gamma_density import cli

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_trace_csv(capsys):
    code, out, _ = run(capsys, "trace", "--set", "interval:0,1", "--modulus", "identity", "--point", "0", "--K", "8")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 8
    assert all(float(r["ratio"]) == 0.5 for r in rows)
    assert Fraction(int(rows[3]["alpha_num"]), int(rows[3]["alpha_den"])) == Fraction(1, 32)


def test_trace_empty_set_ratio_one(capsys):
    code, out, _ = run(capsys, "trace", "--set", "empty", "--modulus", "log", "--point", "0", "--K", "8")
    assert code == 0
    assert all(float(r["ratio"]) == 1.0 for r in csv.DictReader(io.StringIO(out)))


@pytest.mark.parametrize("fmt", ["json", "ascii", "svg"])
def test_trace_formats(capsys, fmt):
    code, out, _ = run(capsys, "trace", "--set", "dyadic-gap", "--modulus", "log", "--point", "0", "--format", fmt)
    assert code == 0 and out.strip()
    if fmt == "json":
        assert len(json.loads(out)["rows"]) == 60
    if fmt == "svg":
        assert out.lstrip().startswith("<svg") or "<svg" in out


def test_trace_beyond_validity_radius_is_domain_error(capsys):
    code, _, err = run(capsys, "trace", "--set", "dyadic-gap", "--modulus", "log", "--point", "0", "--alpha0", "1")
    assert code == 3 and "validity radius" in err


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "--set", "interval:0,1", "--modulus", "identity", "--point", "0")
    assert code == 0
    assert json.loads(out)["verdict"]["class"] == "neither"
    code, out, _ = run(capsys, "classify", "--set", "dyadic-gap", "--modulus", "log", "--point", "0")
    assert json.loads(out)["verdict"]["density"] is False


def test_open_with_witness(capsys):
    code, out, _ = run(capsys, "open", "--set", "interval:0,1", "--add", "2", "--modulus", "identity")
    report = json.loads(out)
    assert code == 0 and report["verdict"] == "NotOpen" and report["witness"] == [2, 1]


def test_condition_a(capsys):
    code, out, _ = run(capsys, "condition-a", "--modulus", "power:1/2", "--epsilon", "0.1")
    report = json.loads(out)
    assert code == 0
    assert report["status"] == "certificate" and Fraction(report["result"]["c_epsilon"]) == Fraction(1, 128)
    code, out, _ = run(capsys, "condition-a", "--modulus", "log", "--epsilon", "0.5")
    assert json.loads(out)["status"] == "refutation-evidence"


def test_validate_modulus(capsys):
    code, out, _ = run(capsys, "validate-modulus", "--modulus", "bounded")
    assert code == 0 and json.loads(out)["report"]["passed"] is True


@pytest.mark.parametrize(
    "argv",
    [
        ["trace", "--set", "nonsense", "--modulus", "identity", "--point", "0"],
        ["trace", "--set", "interval:0,1", "--modulus", "bogus", "--point", "0"],
        ["trace", "--set", "interval:0,1", "--modulus", "identity"],
        ["classify", "--set", "interval:1,0", "--modulus", "identity", "--point", "0"],
        ["verify", "--suite", "nope"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        raise SystemExit(cli.main(argv))
    assert exc.value.code == 2


def test_config_file_supplies_options(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"set": "interval:0,1", "modulus": "identity", "point": "1/2"}))
    code, out, _ = run(capsys, "classify", "--config", str(cfg))
    assert code == 0 and json.loads(out)["verdict"]["class"] == "density"


def test_output_file_written(tmp_path, capsys):
    path = tmp_path / "v.json"
    code, out, _ = run(capsys, "verify", "--suite", "families,bump", "--seed", "3", "--output", str(path))
    report = json.loads(path.read_text())
    assert code == 0 and report["passed"] and set(report["suites"]) == {"families", "bump"}


@pytest.mark.parametrize("example", ["ex17", "ex28", "bump"])
def test_reproductions_match_golden(capsys, example):
    code, out, _ = run(capsys, "reproduce", example)
    assert code == 0
    got = json.loads(out)
    golden = json.loads((GOLDEN / f"{example}.json").read_text())
    assert got["checks"] == golden["checks"]
    assert got["passed"] is True
    assert set(got["values"]) == set(golden["values"])
    for name, g in golden["values"].items():
        v = got["values"][name]
        assert abs(v["value"] - g["expected"]) <= g["tol"]
        assert v["value"] == pytest.approx(g["value"], rel=1e-6, abs=1e-9)
