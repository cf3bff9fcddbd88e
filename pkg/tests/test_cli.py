import json
import subprocess
import sys

import pytest

from relgas.cli import main
from relgas.fixtures import dumps17

STATE_A = '{"rho":1,"v":0.5,"p":1,"e":3,"c":1}'
STATE_B = '{"rho":1,"u":0.3,"v":0.4,"p":1,"e":3,"c":1}'


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def output_of(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_identity_echoes_state(capsys):
    doc = output_of(capsys, "transform1d", "--eps", "0",
                    "--state", STATE_A)
    out = doc["cases"][0]["output"]
    assert out == {"rho": 1.0, "v": 0.5, "p": 1.0, "e": 3.0}


def test_transform1d_fixture_a(capsys):
    doc = output_of(capsys, "transform1d", "--eps", "0.1", "--state", STATE_A,
                    "--form", "1,0")
    state_out = doc["cases"][0]["output"]
    assert state_out["rho"] == pytest.approx(0.917328, abs=1e-6)
    assert state_out["v"] == pytest.approx(0.454545, abs=1e-6)
    assert state_out["p"] == pytest.approx(0.909091, abs=1e-6)
    assert state_out["e"] == pytest.approx(2.864865, abs=1e-6)
    form_out = doc["cases"][1]["output"]
    assert form_out["dt"] == pytest.approx(1.233333, abs=1e-6)


def test_round_trip(capsys):
    doc = output_of(capsys, "transform1d", "--eps", "0.1", "--state", STATE_A)
    starred = dict(doc["cases"][0]["output"], c=1.0)
    doc2 = output_of(capsys, "transform1d", "--eps", "-0.1", "--state",
                     json.dumps(starred))
    back = doc2["cases"][0]["output"]
    for key, want in (("rho", 1.0), ("v", 0.5), ("p", 1.0), ("e", 3.0)):
        assert back[key] == pytest.approx(want, rel=1e-12)


def test_determinism_byte_identical(capsys):
    args = ("transform2d", "--eps", "0.1", "--state", STATE_B, "--frame")
    _, out1, _ = run_cli(capsys, *args)
    _, out2, _ = run_cli(capsys, *args)
    assert out1 == out2


def test_exit_code_domain_error(capsys):
    code, _, err = run_cli(capsys, "transform1d", "--eps", "-2",
                           "--state", STATE_A)
    assert code == 1
    assert "domain error" in err


def test_exit_code_usage_malformed_json(capsys):
    code, _, err = run_cli(capsys, "transform1d", "--eps", "0.1",
                           "--state", "{not json")
    assert code == 2
    assert "usage error" in err


def test_exit_code_usage_unknown_flag(capsys):
    with pytest.raises(SystemExit) as err:
        main(["transform1d", "--frobnicate", "--state", STATE_A])
    assert err.value.code == 2


def test_flow_cli_matches_closed_form(capsys):
    doc = output_of(capsys, "flow", "--dim", "1", "--eps", "0.1",
                    "--state", STATE_A, "--steps", "64")
    out = doc["cases"][0]["output"]
    assert out["rho"] == pytest.approx(0.917328, abs=1e-6)
    assert out["dt"] == pytest.approx(1.233333, abs=1e-6)
    assert out["error_estimate"] < 1e-10


def test_invariants_cli_with_annihilation(capsys):
    doc = output_of(capsys, "invariants", "--dim", "2", "--state", STATE_B,
                    "--check-annihilation")
    inv = doc["cases"][0]["output"]
    assert inv["j4"] == pytest.approx(0.461880, abs=1e-6)
    resid = doc["cases"][1]["output"]
    assert abs(resid["j4_printed"]) > 1e-2
    assert abs(resid["j4"]) < 1e-6


def test_limit_scan_cli(capsys):
    doc = output_of(capsys, "limit-scan", "--eps", "0.1", "--state", STATE_A,
                    "--c-values", "10,100,1000")
    out = doc["cases"][0]["output"]
    assert out["certified"] is True
    assert "v" in out["skipped"]


def test_table_format(capsys):
    code, out, _ = run_cli(capsys, "transform1d", "--eps", "0.1",
                           "--state", STATE_A, "--format", "table")
    assert code == 0
    assert "operation: transform_state_1param" in out
    assert "output.rho = 0.917327716" in out


def test_manufacture_verify_field_pipeline(capsys, tmp_path):
    grid_path = str(tmp_path / "grid.csv")
    code, _, err = run_cli(capsys, "manufacture", "--dim", "1",
                           "--velocity", "tanh:0.5,0.05,3,0.5",
                           "--pressure", "constant:1",
                           "--wave-speed", "0.15",
                           "--nx", "64", "--nt", "64", "--out", grid_path)
    assert code == 0, err
    doc = output_of(capsys, "verify-field", "--grid", grid_path,
                    "--eps", "0.1")
    out = doc["cases"][0]["output"]
    assert out["coordinates"]["loop_defect"] < 1e-4
    assert max(out["starred_residuals"]["l2"]) < 1e-3


def test_convergence_cli(capsys):
    doc = output_of(capsys, "convergence", "--dim", "1", "--eps", "0.1",
                    "--velocity", "tanh:0.5,0.05,3,0.5",
                    "--pressure", "constant:1", "--wave-speed", "0.15",
                    "--resolutions", "32,64")
    orders = doc["cases"][0]["output"]["orders"]
    assert all(isinstance(o, float) for o in orders)


def test_fixtures_check_pass_and_mismatch(capsys, tmp_path):
    case = {
        "operation": "transform_state_1param",
        "input": {"state": {"rho": 1.0, "v": 0.5, "p": 1.0, "e": 3.0, "c": 1.0},
                  "eps": 0.1},
        "expected": {"rho": 0.91732771613389952, "v": 0.45454545454545453,
                     "p": 0.90909090909090906, "e": 2.8648648648648649},
        "rtol": 1e-12, "atol": 1e-15, "provenance": "derived",
    }
    good = tmp_path / "good.json"
    good.write_text(dumps17({"schema": "1", "cases": [case]}))
    code, out, _ = run_cli(capsys, "fixtures", "check", str(good))
    assert code == 0
    assert json.loads(out)["cases"][0]["output"]["ok"] is True

    bad_case = json.loads(json.dumps(case))
    bad_case["expected"]["e"] += 1e-3
    bad = tmp_path / "bad.json"
    bad.write_text(dumps17({"schema": "1", "cases": [case, bad_case]}))
    code, out, _ = run_cli(capsys, "fixtures", "check", str(bad))
    assert code == 3
    doc = json.loads(out)
    assert doc["cases"][0]["output"]["ok"] is False
    mism = doc["cases"][0]["output"]["mismatches"]
    assert len(mism) == 1
    assert mism[0]["case"] == 1
    assert mism[0]["path"] == "/e"


def test_fixtures_check_malformed_schema(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"schema": "2", "cases": []}')
    code, _, err = run_cli(capsys, "fixtures", "check", str(bad))
    assert code == 2


def test_four_param_cli_paths(capsys):
    doc = output_of(capsys, "transform1d", "--state", STATE_A,
                    "--four-param=-10,10,1,10", "--form", "1,0")
    assert doc["cases"][0]["operation"] == "transform_state_4param"
    assert doc["cases"][0]["output"]["rho"] == pytest.approx(0.917328, abs=1e-6)
    assert doc["cases"][1]["output"]["dt"] == pytest.approx(1.233333, abs=1e-6)
    doc = output_of(capsys, "transform2d", "--state", STATE_B,
                    "--four-param=-10,10,1,10", "--scaled", "--frame")
    assert doc["cases"][1]["output"]["det"] == pytest.approx(1.356667, abs=1e-6)


def test_limit_scan_unsorted_c_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "limit-scan", "--eps", "0.1",
                           "--state", STATE_A, "--c-values", "100,10")
    assert code == 2
    assert "usage error" in err


def test_missing_grid_file_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "verify-field", "--grid", "/nonexistent.csv",
                           "--eps", "0.1")
    assert code == 2


def test_console_script_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "relgas", "transform1d", "--eps", "0",
         "--state", STATE_A],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["cases"][0]["output"]["rho"] == 1.0
