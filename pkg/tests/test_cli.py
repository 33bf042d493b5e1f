import csv
import io
import json
import subprocess
import sys

import pytest

from dirac_susy.cli import main


def run(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "dirac_susy", *args],
        capture_output=True,
        text=True,
        check=False,
    )
    return proc.returncode, proc.stdout, proc.stderr


def test_spectrum_golden_values():
    code, out, _ = run("spectrum", "--nr-max", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["channel"] == {"kappa": -1, "lambda": 1.0}
    energies = [lv["energy"] for lv in doc["levels"]]
    assert energies == pytest.approx([0.6, 3.75 / 4.25, 8.75 / 9.25], rel=1e-14)
    assert doc["meta"]["a1"] == 0.5 and doc["meta"]["command"] == "spectrum"


def test_spectrum_csv_golden():
    code, out, _ = run("spectrum", "--nr-max", "1", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["n_r", "nhat", "branch", "energy", "energy_over_mass", "a_sq", "gamma"]
    assert float(rows[1]["energy"]) == pytest.approx(0.88235294117647058824, rel=1e-15)
    assert rows[1]["branch"] == "+"


def test_minus_branch_note():
    code, out, err = run("spectrum", "--branch", "both", "--nr-max", "0", "--a1", "0", "--a2", "0.5")
    assert code == 0
    assert "lower (-) branch" in err
    energies = sorted(lv["energy"] for lv in json.loads(out)["levels"])
    assert energies == pytest.approx([-0.89442719099991587856, 0.89442719099991587856], rel=1e-14)


@pytest.mark.parametrize(
    "args",
    [
        ("spectrum",),
        ("wavefunction", "--nr", "1", "--samples", "21"),
        ("verify", "--nr-max", "2"),
        ("compare", "--nr-max", "0", "--points", "1000"),
    ],
)
def test_json_is_byte_identical_across_runs(args):
    first = run(*args)
    second = run(*args)
    assert first[0] == second[0]
    assert first[1] == second[1] and first[1]


def test_wavefunction_sample_shape_and_node():
    code, out, _ = run("wavefunction", "--nr", "1", "--samples", "101")
    assert code == 0
    doc = json.loads(out)
    assert doc["columns"] == ["r", "F", "G"]
    samples = doc["samples"]
    assert len(samples) == 101
    assert samples[0][1:] == [0.0, 0.0]
    F = [row[1] for row in samples[1:]]
    assert sum(1 for a, b in zip(F, F[1:]) if a * b < 0) == 1
    assert doc["level"]["energy"] == pytest.approx(3.75 / 4.25, rel=1e-14)


def test_wavefunction_hatted_ground_state():
    code, out, _ = run("wavefunction", "--basis", "hatted", "--samples", "5", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# level n_r=0")
    header = [ln for ln in lines if not ln.startswith("#")][0]
    assert header == "r,F_hat,G_hat"


def test_verify_passes_by_default():
    code, out, _ = run("verify")
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] is True
    assert {c["check"] for c in doc["checks"]} >= {"shape_invariance", "commutator", "intertwining"}


def test_verify_detects_injected_fault():
    code, out, _ = run("verify", "--inject-fault")
    assert code == 1
    checks = {c["check"]: c for c in json.loads(out)["checks"]}
    assert checks["commutator"]["status"] == "FAIL"
    assert checks["shape_invariance"]["status"] == "PASS"


def test_verify_skips_non_binding_channel():
    code, out, _ = run("verify", "--a1", "1.5", "--a2", "0")
    assert code == 0
    statuses = {c["check"]: c["status"] for c in json.loads(out)["checks"]}
    assert statuses["commutator"] == "SKIP"
    assert statuses["shape_invariance"] == "PASS"


def test_compare_within_tolerance():
    code, out, _ = run("compare", "--nr-max", "1")
    assert code == 0
    for row in json.loads(out)["levels"]:
        assert row["abs_delta"] < row["tolerance"] == 1e-5


def test_compare_coarse_grid_fails_tolerance():
    code, out, _ = run("compare", "--nr-max", "0", "--points", "400", "--no-richardson")
    assert code == 1
    assert json.loads(out)["levels"][0]["abs_delta"] > 1e-5


@pytest.mark.parametrize(
    "args, code, kind",
    [
        (("spectrum", "--a1", "1.5", "--a2", "0"), 2, "NonBindingChannel"),
        (("spectrum", "--mass", "-1"), 2, "InvalidInput"),
        (("wavefunction", "--c", "0"), 3, "DegenerateTransform"),
        (("wavefunction", "--a1", "0", "--a2", "0"), 2, "UnboundState"),
    ],
)
def test_error_exit_codes(args, code, kind):
    rc, out, err = run(*args)
    assert rc == code
    assert out == ""
    payload = json.loads(err.strip().splitlines()[-1])
    assert payload == {"error": kind, "message": payload["message"], "exit_code": code}


def test_usage_error_exit_code():
    rc, _, err = run("spectrum", "--branch", "sideways")
    assert rc == 2
    assert "invalid choice" in err


def test_main_in_process(capsys):
    assert main(["spectrum", "--nr-max", "0", "--format", "csv"]) == 0
    assert capsys.readouterr().out.splitlines()[1].startswith("0,1,+,0.6")
