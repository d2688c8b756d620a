import io
import json
from pathlib import Path

import pytest

from paulitwirl.cli import RunConfig, main, run

SAMPLES = Path(__file__).resolve().parent.parent / "samples"
TWO = str(SAMPLES / "two_qubit.txt")
FIELD = str(SAMPLES / "global_field.txt")


def run_json(capsys, *argv):
    code = main([*argv, "--format", "json"])
    return code, json.loads(capsys.readouterr().out)


def test_build_two_qubit(capsys):
    code, data = run_json(capsys, "build", "-i", TWO)
    assert code == 0
    assert data["status"] == "ok"
    assert data["V"] == ["IX", "IZ", "ZX", "YX", "YY"]
    assert data["W_tilde"] == ["IX", "ZI", "YI"]
    assert data["N"] == 3
    assert data["achieved_table"]["entries"] == data["target_table"]["entries"]
    assert data["achieved_table"]["rows"] == data["W_tilde"]
    assert data["target_table"]["entries"] == [[1, -1, 1, 1], [1, 1, -1, 1], [1, 1, 1, -1]]
    assert len(data["W"]) == 8


def test_build_text_summary(capsys):
    assert main(["build", "-i", TWO]) == 0
    out = capsys.readouterr().out
    assert "W~      (3): IX ZI YI" in out
    assert "twirling condition: ok" in out


def test_build_with_stabilisers(capsys, tmp_path):
    spec = tmp_path / "n.txt"
    spec.write_text("1 0 I\n1 0 X\n1 0 Y\n1 0 Z\n")
    code, data = run_json(capsys, "build", "-i", str(spec), "--stabilisers", "Z")
    assert code == 0
    assert data["substitution"]["active"] == ["X"]


def test_verify_global_field_baseline(capsys):
    code, data = run_json(capsys, "verify", "-i", FIELD, "--baseline")
    assert code == 0
    d = data["plan"]["diagnostics"]
    assert (d["size_W_tilde"], d["baseline_generators"]) == (3, 16)
    checks = {c["name"]: c for c in data["verification"]["checks"]}
    assert checks["baseline_condition"]["passed"]
    assert checks["state_twirl_matches_prediction"]["passed"]


def test_verify_two_qubit_all_checks(capsys):
    code, data = run_json(capsys, "verify", "-i", TWO)
    assert code == 0
    names = [c["name"] for c in data["verification"]["checks"]]
    assert names == [
        "twirling_condition",
        "target_table_match",
        "size_bounds",
        "state_twirl_matches_prediction",
        "choi_offdiagonal",
        "choi_diagonal_matches_prediction",
    ]


def test_simulate_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["simulate", "-i", TWO, "--seed", "5", "--samples", "200", "-o", str(a)]) == 0
    assert main(["simulate", "-i", TWO, "--seed", "5", "--samples", "200", "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    data = json.loads(a.read_text())
    assert data["exact_vs_predicted_max_abs"] < 1e-10
    assert set(data["predicted_channel"]) == {"IX", "IZ", "ZX", "YX", "YY"}


def test_decompose(capsys):
    code, data = run_json(capsys, "decompose", "-i", str(SAMPLES / "dephasing.txt"))
    assert code == 0
    assert data["weights"] == [0.9, 0.1]
    assert [t["pauli"] for t in data["kraus"][1]["terms"]] == ["Z"]


def test_tables(capsys):
    code, data = run_json(capsys, "tables", "--size", "2")
    assert code == 0
    assert data["generator_table"]["entries"] == [[-1, 1], [1, -1]]
    assert len(data["quotient_table"]["entries"]) == 4


def test_missing_input_is_error_record(capsys):
    code = main(["build"])
    data = json.loads(capsys.readouterr().out)
    assert code == 2
    assert data["status"] == "error" and "--input" in data["message"]


def test_bad_spec_reports_line(capsys, tmp_path):
    spec = tmp_path / "bad.txt"
    spec.write_text("1 0 X\n1 0 Q\n")
    code = main(["build", "-i", str(spec)])
    data = json.loads(capsys.readouterr().out)
    assert code == 2
    assert data["error"] == "NoiseSpecError"
    assert data["message"].startswith("line 2:")


def test_bad_tolerance_rejected(capsys):
    assert main(["verify", "-i", TWO, "--tol", "0"]) == 2
    assert json.loads(capsys.readouterr().out)["status"] == "error"


def test_run_config_defaults():
    cfg = RunConfig("build")
    assert cfg.seed == 0 and cfg.tol > 0
    with pytest.raises(ValueError):
        RunConfig("launch")


def test_failed_check_exits_one(tmp_path):
    # a tolerance far below float precision makes the dense checks fail
    out = io.StringIO()
    code = run(RunConfig("verify", input=Path(TWO), tol=1e-30), stdout=out)
    assert code == 1
    assert "FAIL" in out.getvalue()


def test_output_file_written(tmp_path, capsys):
    target = tmp_path / "plan.json"
    assert main(["build", "-i", TWO, "-o", str(target)]) == 0
    assert json.loads(target.read_text())["W_tilde"] == ["IX", "ZI", "YI"]
    assert "W~" in capsys.readouterr().out
