from __future__ import annotations

import json
import subprocess
import sys

import pytest

from torusmirror.cli import run


def run_json(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip().startswith("{") else out


def test_check_builtin(capsys):
    code, rep = run_json(capsys, ["check", "--spec", "hesse"])
    assert code == 0 and rep["pass"]
    assert len(rep["inputs"]["spec_sha256"]) == 64


def test_check_failing_spec(capsys, tmp_path):
    path = tmp_path / "bad.spec"
    path.write_text("N = 2 1; 0 2\nM = 1 0; 0 1\nB = 0.2 0; 0 0.2\n")
    code, rep = run_json(capsys, ["check", "--spec", str(path)])
    assert code == 1 and not rep["pass"]


def test_invariant_basis_rows(capsys):
    code, rep = run_json(capsys, ["basis", "--spec", "kummer-degenerate", "--k", "3", "--invariant"])
    assert code == 0
    assert rep["data"]["count"] == 20 and len(rep["data"]["basis"]) == 20


def test_basis_csv(capsys):
    assert run(["basis", "--spec", "hesse", "--k", "2", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "index,classes" and len(lines) == 7


def test_hesse_quadrics_empty(capsys):
    code, rep = run_json(capsys, ["relations", "--spec", "hesse", "--degree", "2"])
    assert code == 0 and rep["data"]["count"] == 0


def test_sklyanin_relations(capsys):
    code, rep = run_json(capsys, ["relations", "--spec", "sklyanin", "--degree", "2",
                                  "--noncommutative"])
    assert code == 0 and rep["data"]["count"] == 3


def test_product_with_mirror(capsys):
    code, rep = run_json(capsys, ["product", "--spec", "hesse", "[1/3]@1", "2/3@1", "--mirror"])
    assert code == 0
    assert rep["data"]["level"] == 2
    assert rep["checks"][0]["id"] == "mirror_agreement" and rep["checks"][0]["pass"]


def test_product_rejects_foreign_class(capsys):
    assert run(["product", "--spec", "hesse", "1/4@1", "0@1"]) == 2


def test_verify_hesse(capsys):
    code, rep = run_json(capsys, ["verify", "--family", "hesse", "--tau", "i"])
    assert code == 0
    re, im = rep["data"]["hesse_coefficient"]
    assert abs(re - 8.196152422706632) < 1e-9 and abs(im) < 1e-12


def test_verify_sklyanin_shift(capsys):
    code, rep = run_json(capsys, ["verify", "--family", "sklyanin", "--b", "1"])
    assert code == 0 and rep["data"]["branch"] == "commutative"


def test_verify_all_parallel_matches_serial(capsys):
    assert run(["verify", "--family", "all"]) == 0
    serial = capsys.readouterr().out
    assert run(["verify", "--family", "all", "--jobs", "2"]) == 0
    assert capsys.readouterr().out == serial


def test_jseries(capsys):
    code, rep = run_json(capsys, ["jseries", "--terms", "4"])
    assert code == 0
    assert rep["data"]["rounded"] == [1, 744, 196884, 21493760]


def test_output_file_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["verify", "--family", "quasihomogeneous", "--out", str(a)]) == 0
    assert run(["verify", "--family", "quasihomogeneous", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["inputs"]["tol"] == 1e-14


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["basis", "--k", "1"],
    ["basis", "--spec", "hesse", "--k", "0"],
    ["basis", "--spec", "hesse", "--k", "1", "--colour", "red"],
    ["basis", "--spec", "/no/such/file", "--k", "1"],
    ["verify", "--family", "hesse", "--tau", "not-a-number"],
    ["check", "--spec", "hesse", "--tol", "0"],
])
def test_usage_errors(argv, capsys):
    assert run(argv) == 2


def test_numerical_error_exit(capsys):
    code = run(["verify", "--family", "quasihomogeneous", "--tau", "0.5+0.01i", "--max-radius", "4"])
    assert code == 3
    assert "PrecisionError" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "torusmirror.cli", "basis", "--spec", "hesse",
                           "--k", "1", "--format", "csv"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1:] == ["0,[0]@1", "1,[1/3]@1", "2,[2/3]@1"]
