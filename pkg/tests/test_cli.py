import json
import subprocess
import sys

import pytest

from hopflattice.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, EXIT_RESOURCE, main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, json.loads(out.out) if out.out.strip() else None, out.err


def test_catalog(capsys):
    code, doc, _ = run(["catalog"], capsys)
    assert code == EXIT_OK
    assert "z2" in doc["algebras"] and "torus-3-3" in [i["name"] for i in doc["instances"]]
    assert doc["self_test"] is True


def test_algebra_verify_ok(capsys):
    code, doc, _ = run(["algebra", "verify", "--algebra", "z3", "--jobs", "1"], capsys)
    assert code == EXIT_OK and doc["passed"]


def test_check_regular_fails_on_star(capsys):
    code, doc, _ = run(["graph", "check-regular", "--graph", "star-3"], capsys)
    assert code == EXIT_FAIL
    code, _, _ = run(["graph", "check-regular", "--graph", "tetrahedron"], capsys)
    assert code == EXIT_OK


def test_input_errors(capsys, tmp_path):
    code, doc, err = run(["algebra", "verify", "--algebra", "nope"], capsys)
    assert code == EXIT_INPUT and doc["error"] == "input" and err.startswith("error:")
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, _, _ = run(["graph", "info", "--graph", str(bad)], capsys)
    assert code == EXIT_INPUT
    code, _, _ = run(["protected-dim", "--algebra", "z2", "--graph", "star-3"], capsys)
    assert code == EXIT_INPUT
    code, _, _ = run(["no-such-command"], capsys)
    assert code == EXIT_INPUT


def test_resource_cap(capsys):
    code, doc, _ = run(["kitaev", "verify", "gauge", "--algebra", "s3", "--graph", "tetrahedron"], capsys)
    assert code == EXIT_RESOURCE and doc["error"] == "resource"


def test_protected_dim(capsys):
    code, doc, _ = run(["protected-dim", "--algebra", "z2", "--graph", "tetrahedron", "--dense-oracle"], capsys)
    assert code == EXIT_OK and doc["passed"]


def test_group_table_input(capsys, tmp_path):
    path = tmp_path / "z2.json"
    path.write_text(json.dumps({"order": 2, "table": [[0, 1], [1, 0]], "unit": 0, "inverses": [0, 1]}))
    code, doc, _ = run(["algebra", "verify", "--algebra", str(path), "--jobs", "1"], capsys)
    assert code == EXIT_OK and doc["passed"]


@pytest.mark.parametrize("jobs", ["1", "2"])
def test_no_timing_output_is_reproducible(tmp_path, jobs):
    argv = [sys.executable, "-m", "hopflattice", "verify", "--algebra", "z2", "--graph", "tetrahedron",
            "--suite", "hopf", "--suite", "kitaev-protected", "--suite", "gauge-module", "--no-timing"]
    a = subprocess.run(argv + ["--jobs", "1"], capture_output=True, text=True, check=True).stdout
    b = subprocess.run(argv + ["--jobs", jobs], capture_output=True, text=True, check=True).stdout
    assert a == b
    assert "wall_time" not in a
