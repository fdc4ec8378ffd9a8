import json
from pathlib import Path

import jsonschema
import pytest

from liepoint.cli import main
from liepoint.schemas import SCHEMAS

GOLDEN = Path(__file__).parent / "golden"

CASES = {
    "symm_d1": ["symm", "rnc.json", "--degree", "1"],
    "table_paper": ["table", "rnc.json", "--diff-paper", "--adjoint-sign", "paper"],
    "flows": ["flows", "rnc.json", "--diff-paper"],
    "optimal": ["optimal", "rnc.json"],
    "reduce_X4": ["reduce", "rnc.json", "--element", "X4"],
    "reduce_X4-X3": ["reduce", "rnc.json", "--element", "X4-X3"],
}


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, argv):
    code, out, err = run(capsys, argv + ["--json"])
    assert code == 0, err
    return json.loads(out)


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_outputs(capsys, name):
    got = run_json(capsys, CASES[name])
    assert got == json.loads((GOLDEN / f"{name}.json").read_text())
    jsonschema.validate(got, SCHEMAS[CASES[name][0]])


def test_output_is_deterministic(capsys):
    argv = ["optimal", "rnc.json", "--samples", "40", "--seed", "3", "--json"]
    assert run(capsys, argv)[1] == run(capsys, argv)[1]


def test_symm_degree_two(capsys):
    got = run_json(capsys, ["symm", "rnc.json"])
    jsonschema.validate(got, SCHEMAS["symm"])
    assert all(g["check_generator"] for g in got["generators"])
    assert got["expected"]["contained"] == {"X1": True, "X2": True, "X3": True, "X4": True}


def test_table_flags_unreproducible_rows(capsys):
    got = run_json(capsys, CASES["table_paper"])
    assert got["unreproducible_rows"] == ["X1", "X2"]
    scaling = [d for d in got["differences"] if d["row"] in ("X3", "X4")]
    assert scaling == []


def test_flows_match(capsys):
    got = run_json(capsys, CASES["flows"])
    assert all(f["matches_printed"] for f in got["flows"])
    assert got["flows"][3]["map"]["theta"] == "theta*exp(-2*h)"


def test_verify_passes(capsys, tmp_path):
    traj = tmp_path / "t.csv"
    got = run_json(capsys, ["verify", "rnc.json", "--trajectory", str(traj)])
    jsonschema.validate(got, SCHEMAS["verify"])
    assert got["passed"] and got["max_residual"] <= 1e-6
    assert traj.read_text().startswith("s,F_u,")


def test_verify_fd_mode(capsys):
    got = run_json(capsys, ["verify", "rnc.json", "--mode", "fd", "--tol", "1e-4"])
    assert got["mode"] == "fd" and got["passed"]


def test_verify_failure_exit_code(capsys):
    code, out, _ = run(capsys, ["verify", "rnc.json", "--tol", "1e-30"])
    assert code == 3 and "FAILED" in out


def test_text_output_to_file(capsys, tmp_path):
    dest = tmp_path / "out.txt"
    code, out, _ = run(capsys, ["reduce", "rnc.json", "--element", "X3", "--out", str(dest)])
    assert code == 0 and out == ""
    assert "similarity variable: s = y" in dest.read_text()


@pytest.mark.parametrize("argv", [
    ["symm"],
    ["nonsense", "rnc.json"],
    ["symm", "missing.json"],
    ["reduce", "rnc.json", "--element", "X1*X2"],
    ["reduce", "rnc.json", "--element", "X9"],
    ["symm", "rnc.json", "--degree", "-1"],
    ["verify", "rnc.json", "--param", "Pr"],
    ["verify", "rnc.json", "--init", "1,2"],
])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as e:
        code = main(argv)
        raise SystemExit(code)
    assert e.value.code == 1


def test_math_error_exit_code(capsys, tmp_path):
    raw = json.loads(Path(__file__).parent.parent.joinpath(
        "src", "liepoint", "data", "rnc.json").read_text())
    raw["expected_generators"].append({"label": "X5", "components": {"y": "x^2"}})
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(raw))
    code, _, err = run(capsys, ["table", str(path)])
    assert code == 2 and "liepoint:" in err


def test_bad_json_file(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert run(capsys, ["symm", str(path)])[0] == 1
