import csv
import io
import json
import subprocess
import sys

import pytest

from qas.axioms import canonical_family, counterexample_families
from qas.cli import main
from qas.physical import LabelModel, LabelSets


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out) if out.strip() else None, err


def test_add_mul_succ(capsys):
    code, data, _ = run_json(capsys, "add", "--k", "2", "--L", "3", "3", "6")
    assert code == 0 and data["output"] == 1 and data["inputs"] == [3, 6]
    assert data["ledger"]["successor_calls"] == 2
    code, data, _ = run_json(capsys, "mul", "--k", "2", "--L", "3", "3", "5")
    assert code == 0 and data["output"] == 7 and data["outputs"] == [3, 5, 0, 7]
    code, data, _ = run_json(capsys, "succ", "--k", "2", "--L", "3", "--j", "2", "0")
    assert code == 0 and data["output"] == 2


def test_digit_operands(capsys):
    code, data, _ = run_json(capsys, "add", "--k", "3", "--L", "2", "--digits", "12", "21")
    assert code == 0 and data["inputs"] == [5, 7] and data["output"] == 3
    assert data["output_digits"] == "10"


@pytest.mark.parametrize(
    "argv",
    [
        ("add", "--k", "2", "--L", "3", "3", "8"),
        ("add", "--k", "2", "--L", "3", "x", "1"),
        ("succ", "--k", "2", "--L", "3", "--j", "4", "0"),
        ("axioms", "--k", "2", "--L", "30"),
        ("axioms",),
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    assert err.count("\n") == 1 and "error" in err


def test_argparse_errors_are_single_line(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["add", "--k", "2"])
    assert exc.value.code == 2
    assert capsys.readouterr().err.count("\n") == 1


def test_axioms(capsys, tmp_path):
    code, data, _ = run_json(capsys, "axioms", "--k", "2", "--L", "3")
    assert code == 0 and data["passed"]
    code, data, _ = run_json(capsys, "axioms", "--k", "3", "--L", "2")
    assert code == 0 and data["passed"]
    model = tmp_path / "model.json"
    model.write_text(json.dumps({"A": ["x", "y"], "B": ["up", "down"], "g": [1, 0], "d": [1, 0]}))
    out = tmp_path / "report.json"
    code, _, _ = run(capsys, "axioms", "--model", str(model), "--out", str(out))
    assert code == 0 and json.loads(out.read_text())["passed"]


def test_family_check(capsys, tmp_path):
    path = tmp_path / "canonical.json"
    path.write_text(json.dumps(canonical_family(2, 3).to_json()))
    code, data, _ = run_json(capsys, "family-check", str(path))
    assert code == 0 and data["passed"] and data["ordering"] == ["a1", "a2", "a3"]
    assert data["numbering"]["images"] == list(range(8))
    family, prop = counterexample_families()["non_commuting"]
    path.write_text(json.dumps(family.to_json()))
    code, data, _ = run_json(capsys, "family-check", str(path))
    assert code == 1 and not data["properties"][str(prop)]["passed"]
    path.write_text('{"k": 2,\n "dimension": }')
    code, out, err = run(capsys, "family-check", str(path))
    assert code == 2 and "line 2" in err


def test_encode_decode(capsys, tmp_path):
    model = tmp_path / "model.json"
    model.write_text(json.dumps({"A": ["x", "y", "z"], "B": ["down", "up"], "g": [0, 1, 2], "d": [0, 1]}))
    code, data, _ = run_json(capsys, "encode", "--model", str(model), "5")
    assert code == 0 and data["state"] == {"x": "up", "y": "down", "z": "up"}
    code, data, _ = run_json(capsys, "decode", "--model", str(model), json.dumps(data["state"]))
    assert code == 0 and data["number"] == 5 and data["digits"] == "101"
    code, data, _ = run_json(capsys, "decode", "--model", str(model), "011")
    assert data["number"] == 3
    code, _, err = run(capsys, "decode", "--model", str(model), '{"x": "up"}')
    assert code == 2


def test_grover(capsys, tmp_path):
    code, data, _ = run_json(capsys, "grover", "--L", "3", "--target", "101", "--iters", "2")
    assert code == 0
    assert data["success_probability"] == pytest.approx(0.9453125, abs=1e-9)
    model = tmp_path / "model.json"
    m = LabelModel(LabelSets(("a", "b", "c"), ("up", "down")), (2, 0, 1), (1, 0))
    model.write_text(json.dumps(m.to_json()))
    code, data2, _ = run_json(capsys, "grover", "--target", "101", "--iters", "2", "--model", str(model))
    assert data2["probabilities"] == data["probabilities"]
    assert "target_number" in data2


def test_shor(capsys):
    code, data, _ = run_json(capsys, "shor", "--M", "15", "--m", "7", "--seed", "2", "--trials", "10")
    assert code == 0 and data["n"] == 8 and data["factors"] == [3, 5]
    _, again, _ = run_json(capsys, "shor", "--M", "15", "--m", "7", "--seed", "2", "--trials", "10")
    assert again == data
    code, _, err = run(capsys, "shor", "--M", "15", "--m", "5")
    assert code == 2 and "gcd" in err


def test_resources(capsys, tmp_path):
    out = tmp_path / "scaling.csv"
    code, data, _ = run_json(capsys, "resources", "--kmax", "3", "--Lmax", "6", "--out", str(out))
    assert code == 0 and data["rows"] > 0
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert {r["classification"] for r in rows} == {"polynomial", "exponential"}
    code, text, _ = run(capsys, "resources", "--kmax", "2", "--Lmax", "2")
    assert text.splitlines()[0] == "k,L,j,operation,worst_count,mean_count,bound,classification"


def test_pretty_output(capsys):
    code, out, _ = run(capsys, "succ", "--k", "2", "--L", "3", "--pretty", "1")
    assert out.startswith("{\n")
    assert json.loads(out)["output"] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qas", "add", "--k", "2", "--L", "3", "3", "6"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["output"] == 1
