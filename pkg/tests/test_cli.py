"""Command line: pipeline composability, determinism, exit codes."""

import json
import subprocess
import sys

import numpy as np
import pytest

from pimub.cli import main
from pimub.operators import matrix_from_json, matrix_to_json
from pimub.tomography import PIStateSpec, random_pi_state


def run_cli(*argv):
    return main(list(argv))


# ----------------------------------------------------------------------
# field
# ----------------------------------------------------------------------

def test_field_export(tmp_path, capsys):
    out = tmp_path / "field.json"
    assert run_cli("field", "--n", "2", "--out", str(out)) == 0
    obj = json.loads(out.read_text())
    assert obj["n"] == 2
    assert obj["irreducible_poly"] == 0b111
    assert len(obj["selfdual_basis"]) == 2


def test_field_verify_flag(tmp_path):
    out = tmp_path / "field8.json"
    assert run_cli("field", "--n", "8", "--verify", "--out", str(out)) == 0
    obj = json.loads(out.read_text())
    assert obj["checks"] == {"irreducible": True, "selfdual_gram_identity": True}


def test_field_usage_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        run_cli("field", "--n", "0")
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        run_cli("field", "--n", "13")
    assert exc.value.code == 2


# ----------------------------------------------------------------------
# mubs / orbits
# ----------------------------------------------------------------------

def test_mubs_export_schema(tmp_path):
    out = tmp_path / "mubs.json"
    assert run_cli("mubs", "--n", "2", "--out", str(out)) == 0
    obj = json.loads(out.read_text())
    assert obj["n"] == 2
    assert len(obj["bases"]) == 5
    labels = [b["label"] for b in obj["bases"]]
    assert "vertical" in labels
    assert {"slope": 0} in labels
    for basis in obj["bases"]:
        assert len(basis["vectors"]) == 4


def test_mubs_export_bytes_are_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run_cli("mubs", "--n", "3", "--out", str(a))
    run_cli("mubs", "--n", "3", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_orbits_json_and_csv(tmp_path, capsys):
    out = tmp_path / "orbits.json"
    assert run_cli("orbits", "--n", "3", "--out", str(out)) == 0
    report = capsys.readouterr().err
    assert "24" in report
    obj = json.loads(out.read_text())
    assert obj["orbit_count"] == 24
    assert obj["independent_count"] == 19

    csv_out = tmp_path / "orbits.csv"
    assert run_cli("orbits", "--n", "3", "--csv", "--out", str(csv_out)) == 0
    lines = csv_out.read_text().strip().splitlines()
    assert len(lines) == 25  # header + 24 orbits


# ----------------------------------------------------------------------
# simulate / reconstruct pipeline
# ----------------------------------------------------------------------

def test_exact_pipeline_round_trip(tmp_path):
    rec = tmp_path / "records.json"
    rep = tmp_path / "report.json"
    assert run_cli("simulate", "--n", "2", "--seed", "3", "--exact", "--out", str(rec)) == 0
    assert run_cli("reconstruct", "--records", str(rec), "--out", str(rep)) == 0
    report = json.loads(rep.read_text())
    assert report["n"] == 2
    assert report["orbit_count"] == 13
    assert report["independent_count"] == 9
    assert report["physical"]
    assert report["trace_distance"] < 1e-9
    assert report["fidelity"] > 1 - 1e-9
    assert len(report["bases_used"]) == 4
    # exact inputs: orbit-average combination agrees with the default
    rep2 = tmp_path / "report_avg.json"
    assert run_cli(
        "reconstruct", "--records", str(rec), "--mode", "average", "--out", str(rep2)
    ) == 0
    assert json.loads(rep2.read_text())["trace_distance"] < 1e-9


def test_sampled_pipeline_with_projection(tmp_path):
    rec = tmp_path / "records.json"
    rep = tmp_path / "report.json"
    assert run_cli(
        "simulate", "--n", "2", "--seed", "4", "--shots", "20000", "--out", str(rec)
    ) == 0
    payload = json.loads(rec.read_text())
    assert payload["shots"] == 20000
    assert all(r.get("shots") == 20000 for r in payload["records"])
    assert run_cli("reconstruct", "--records", str(rec), "--project", "--out", str(rep)) == 0
    report = json.loads(rep.read_text())
    assert report["physical"]
    assert report["fidelity"] > 0.97


@pytest.mark.parametrize("method", ("twirl", "dicke", "blocks"))
def test_simulate_methods_are_deterministic(tmp_path, method):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run_cli("simulate", "--n", "2", "--seed", "11", "--method", method, "--exact", "--out", str(a))
    run_cli("simulate", "--n", "2", "--seed", "11", "--method", method, "--exact", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_simulate_from_state_file(tmp_path):
    state = tmp_path / "state.json"
    rec = tmp_path / "records.json"
    rep = tmp_path / "report.json"
    rho = random_pi_state(PIStateSpec.twirl(2, seed=8))
    state.write_text(json.dumps(matrix_to_json(rho)))
    assert run_cli(
        "simulate", "--n", "2", "--seed", "1", "--exact",
        "--state", str(state), "--out", str(rec),
    ) == 0
    assert run_cli("reconstruct", "--records", str(rec), "--state", str(state), "--out", str(rep)) == 0
    report = json.loads(rep.read_text())
    assert report["trace_distance"] < 1e-9
    rho_hat = matrix_from_json(report["state"])
    assert np.abs(rho_hat - rho).max() < 1e-9


def test_unphysical_estimate_reports_no_fidelity(tmp_path):
    # two slope bases both claiming a deterministic outcome are jointly
    # impossible, so the linear inversion leaves the state set; the report
    # must flag it and withhold the fidelity number
    records = []
    for basis in ({"slope": 0}, {"slope": 1}, {"slope": 3}, "vertical"):
        point = {"nu_bitmask": 0, "p": 1.0}
        rest = [{"nu_bitmask": b, "p": 0.0} for b in (1, 2, 3)]
        records.append({"basis": basis, "data": [point] + rest})
    rec = tmp_path / "records.json"
    rec.write_text(json.dumps({
        "n": 2,
        "records": records,
        "truth": matrix_to_json(np.eye(4, dtype=complex) / 4.0),
    }))
    rep = tmp_path / "report.json"
    assert run_cli("reconstruct", "--records", str(rec), "--out", str(rep)) == 0
    report = json.loads(rep.read_text())
    assert not report["physical"]
    assert report["fidelity"] is None
    assert report["trace_distance"] is not None
    # projecting restores a physical state and with it a fidelity value
    rep2 = tmp_path / "report2.json"
    assert run_cli("reconstruct", "--records", str(rec), "--project", "--out", str(rep2)) == 0
    report2 = json.loads(rep2.read_text())
    assert report2["physical"]
    assert 0.0 <= report2["fidelity"] <= 1.0


def test_reconstruct_missing_file_reports_json_error(tmp_path, capsys):
    assert run_cli("reconstruct", "--records", str(tmp_path / "nope.json")) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "error"
    assert "nope.json" in err["message"]


def test_reconstruct_rejects_malformed_records(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 2, "records": [{"basis": "nosuch"}]}))
    assert run_cli("reconstruct", "--records", str(bad)) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "schema"


def test_simulate_rejects_dimension_mismatch(tmp_path, capsys):
    state = tmp_path / "state.json"
    state.write_text(json.dumps(matrix_to_json(np.eye(8) / 8)))
    code = run_cli(
        "simulate", "--n", "2", "--seed", "1", "--exact",
        "--state", str(state), "--out", str(tmp_path / "r.json"),
    )
    assert code == 1
    assert json.loads(capsys.readouterr().err)["error"] == "schema"


# ----------------------------------------------------------------------
# verify
# ----------------------------------------------------------------------

def test_verify_passes_for_one_and_two_qubits(capsys):
    assert run_cli("verify", "--n", "1") == 0
    assert run_cli("verify", "--n", "2") == 0
    out = capsys.readouterr().out
    assert "[FAIL]" not in out
    assert "both-index swap rule verified" in out


def test_verify_fails_for_three_qubits_and_says_why(capsys):
    assert run_cli("verify", "--n", "3") == 1
    out = capsys.readouterr().out
    assert "[FAIL] mub: swap covariance closes on the family" in out
    assert "[FAIL] tomography: minimal-basis exact round trip" in out
    assert "closed-form orbit count" in out


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "pimub.cli", "--version"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "pimub" in proc.stdout


def test_family_export_is_deterministic_across_processes(tmp_path):
    outs = []
    for name in ("p1.json", "p2.json"):
        out = tmp_path / name
        proc = subprocess.run(
            [sys.executable, "-m", "pimub.cli", "mubs", "--n", "2", "--out", str(out)],
            capture_output=True,
        )
        assert proc.returncode == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
