import json
import subprocess
import sys

import pytest

from epwkit import cli, verify
from epwkit import exterior as ext
from epwkit.lagrangian import LagrangianError, make_rng


def run(argv):
    status, out, err = cli.execute(argv)
    return status, out.decode(), err.decode()


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    cli.determinism_commands(d)
    return {"lag": str(d / "a.lag"), "g3": str(d / "x3.gm"), "g5": str(d / "x5.gm")}


def test_generation_is_byte_identical():
    argv = ["gen-lagrangian", "--prime", "7", "--seed", "4", "--ndv-sample", "500"]
    assert run(argv) == run(argv)
    assert run(argv)[1].startswith("epwkit-lagrangian 1")


def test_stratify_over_f3_counts_every_point(tmp_path):
    lag = tmp_path / "a.lag"
    lag.write_text(run(["gen-lagrangian", "--prime", "3", "--seed", "0"])[1])
    status, out, _ = run(["stratify", "--instance", str(lag)])
    report = json.loads(out)
    assert status == 0 and report["command"] == "stratify" and report["tool"] == "epwkit"
    assert sum(report["result"]["counts"].values()) == 364
    assert "elapsed_seconds" not in report and "jobs" not in report["config"]
    csv = run(["stratify", "--instance", str(lag), "--format", "csv"])[1].splitlines()
    assert csv[0] == "stratum,count" and sum(int(r.split(",")[1]) for r in csv[1:]) == 364


def test_timing_is_opt_in(files):
    report = json.loads(run(["hilbert", "--hyperplanes", "11", "--timing"])[1])
    assert "elapsed_seconds" in report
    assert report["result"]["table"][:6] == [1, 5, 10, 15, 20, 25]


def test_group_aliases_match_flat_commands(files):
    assert run(["epw", "stratify", "--instance", files["lag"]]) == run(["stratify", "--instance", files["lag"]])
    assert run(["gm", "hilbert", "--hyperplanes", "10"]) == run(["hilbert", "--hyperplanes", "10"])


def test_pipeline(files):
    for argv in (
        ["classify-fibers", "--gm", files["g3"]],
        ["double-cover-fiber", "--gm", files["g5"], "--points", "2"],
        ["splitting-section", "--gm", files["g3"]],
        ["cycle-check", "--gm", files["g3"], "--points", "1"],
        ["line-transform", "--instance", files["lag"]],
        ["sextic-line", "--instance", files["lag"], "--allow-extension"],
    ):
        status, out, err = run(argv)
        assert status == 0, err
        assert json.loads(out)["command"] == argv[0]


def test_jobs_do_not_change_outputs(files):
    for argv in (["stratify", "--instance", files["lag"]], ["dual-stratify", "--instance", files["lag"]],
                 ["classify-fibers", "--gm", files["g3"], "--format", "csv"]):
        assert run(argv + ["--jobs", "1"]) == run(argv + ["--jobs", "2"])


def test_errors_carry_a_replay_line(tmp_path):
    status, out, err = run(["stratify", "--instance", str(tmp_path / "missing.lag")])
    assert status == 1 and out == ""
    payload = json.loads(err)
    assert set(payload) == {"error", "message", "command", "replay"}
    assert payload["replay"].startswith("epwkit stratify --instance")


def test_console_script_entry_point(tmp_path):
    out = tmp_path / "h.json"
    proc = subprocess.run([sys.executable, "-m", "epwkit.cli", "hilbert", "--hyperplanes", "8", "--quadrics", "1",
                           "--out", str(out)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(out.read_text())["result"]["polynomial"] == ["1", "17/6", "5/2", "5/3"]


def test_property_suite_detects_a_corrupted_symplectic_form(monkeypatch):
    original = ext.omega_gram

    def symmetric(F):
        G = original(F)
        return [[G[min(i, j)][max(i, j)] for j in range(20)] for i in range(20)]

    monkeypatch.setattr(ext, "omega_gram", symmetric)
    try:
        fails = verify._properties("F7", 10, make_rng(0))
    except LagrangianError:
        return
    assert any(fails.values())


def test_battery_detects_a_wrong_plucker_quadric(monkeypatch):
    real = verify.plucker_quadric
    monkeypatch.setattr(verify, "plucker_quadric", lambda gm, u: real(gm, u).scale(2))
    assert not verify.run(4, "quick").passed


def test_verify_command_reports_each_criterion():
    status, out, _ = run(["verify", "--level", "quick", "--only", "4,8"])
    result = json.loads(out)["result"]
    assert status == 0
    assert [c["id"] for c in result["criteria"]] == [4, 8] and all(c["passed"] for c in result["criteria"])
