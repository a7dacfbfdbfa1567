import json

import numpy as np
import pytest

from spincavity import cli
from spincavity.analysis import FIELDS, sweep


def run_cli(args):
    return cli.main(args)


def test_coeffs_g_zero_reduces_to_cold(capsys):
    assert run_cli(["coeffs", "--g", "0", "--kappa-s", "0", "--gamma", "0.1"]) == 0
    out = capsys.readouterr().out
    assert "r  = 0+0i" in out
    assert "t  = -1+0i" in out
    assert "r0 = 0+0i" in out
    assert "t0 = -1+0i" in out


def test_coeffs_default_point(capsys):
    assert run_cli(["coeffs", "--g", "1", "--kappa-s", "0", "--gamma", "0.1"]) == 0
    out = capsys.readouterr().out
    assert "r  = 0.952381+0i" in out
    assert "t  = -0.047619+0i" in out
    assert "|r0|^2+|t0|^2 = 1" in out


def test_coeffs_unparsable_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as err:
        run_cli(["coeffs", "--g", "1", "--kappa-s", "abc"])
    assert err.value.code == 2
    assert "usage" in capsys.readouterr().err


def _outcome_rows(out):
    rows = {}
    for line in out.splitlines():
        parts = line.split()
        if parts and parts[0] in ("H", "V", "HH", "HV", "VH", "VV"):
            rows[parts[0]] = line
    return rows


def test_run_phase_gate_down_down(capsys):
    code = run_cli(
        ["run", "--protocol", "phase-gate", "--spin1", "0:0,1:0", "--spin2", "0:0,1:0", "--ideal"]
    )
    assert code == 0
    out = capsys.readouterr().out
    rows = _outcome_rows(out)
    assert set(rows) == {"H", "V"}
    for line in rows.values():
        assert line.split()[1] == "0.5"
        # corrected state is |down,down> up to a sign
        amps = [abs(float(x.split(":")[0])) for x in line.split()[3:7]]
        assert amps == pytest.approx([0.0, 0.0, 0.0, 1.0], abs=1e-9)
    assert "efficiency = 1" in out


def test_run_cnot_four_branches(capsys):
    code = run_cli(
        ["run", "--protocol", "cnot", "--spin1", "0:0,1:0", "--spin2", "1:0,0:0", "--ideal"]
    )
    assert code == 0
    rows = _outcome_rows(capsys.readouterr().out)
    assert set(rows) == {"HH", "HV", "VH", "VV"}
    for line in rows.values():
        assert line.split()[1] == "0.25"
        amps = [abs(float(x.split(":")[0])) for x in line.split()[3:7]]
        assert amps == pytest.approx([0.0, 0.0, 0.0, 1.0], abs=1e-9)


def test_run_lossy_efficiency_regression(capsys):
    code = run_cli(
        [
            "run", "--protocol", "cnot",
            "--spin1", "1:0,0:0", "--spin2", "0.6:0,0.8:0",
            "--g", "1", "--kappa-s", "0.05", "--gamma", "0.1",
        ]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert len(_outcome_rows(out)) == 4
    assert "efficiency = 0.906264179" in out


def test_run_trace_labels_stages(capsys):
    run_cli(
        ["run", "--protocol", "phase-gate", "--spin1", "0.6:0,0.8:0",
         "--spin2", "0.8:0,0.6:0", "--ideal", "--trace"]
    )
    out = capsys.readouterr().out
    for label in ("[Eq3]", "[Eq4]", "[Eq5]", "[Eq6]"):
        assert label in out
    run_cli(
        ["run", "--protocol", "cnot", "--spin1", "0.6:0,0.8:0",
         "--spin2", "0.8:0,0.6:0", "--ideal", "--trace"]
    )
    out = capsys.readouterr().out
    for label in ("[Eq8]", "[Eq9]", "[Eq10]"):
        assert label in out


def test_run_rejects_unnormalizable_spin(capsys):
    code = run_cli(
        ["run", "--protocol", "phase-gate", "--spin1", "1:0,1:0", "--spin2", "1:0,0:0", "--ideal"]
    )
    assert code == 3
    assert "not normalizable" in capsys.readouterr().err


def test_run_autonormalizes_with_warning(capsys):
    code = run_cli(
        ["run", "--protocol", "phase-gate",
         "--spin1", "0.6000001:0,0.8:0", "--spin2", "1:0,0:0", "--ideal"]
    )
    assert code == 0
    assert "renormalized" in capsys.readouterr().err


def test_run_ideal_conflicts_with_cavity_flags(capsys):
    code = run_cli(
        ["run", "--protocol", "phase-gate", "--spin1", "1:0,0:0",
         "--spin2", "1:0,0:0", "--ideal", "--g", "1"]
    )
    assert code == 2
    assert "conflicts" in capsys.readouterr().err


def test_run_bad_spin_format_exits_2(capsys):
    with pytest.raises(SystemExit) as err:
        run_cli(["run", "--protocol", "phase-gate", "--spin1", "1,0", "--spin2", "1:0,0:0"])
    assert err.value.code == 2
    capsys.readouterr()


SWEEP_ARGS = [
    "sweep", "--protocol", "phase-gate",
    "--g-min", "0.5", "--g-max", "1.5", "--g-steps", "3",
    "--kappa-s", "0,0.05", "--gamma", "0.1",
    "--samples", "120", "--seed", "9",
]


def test_sweep_csv_contract(tmp_path, capsys):
    out_file = tmp_path / "records.csv"
    assert run_cli(SWEEP_ARGS + ["--out", str(out_file)]) == 0
    capsys.readouterr()
    lines = out_file.read_text().splitlines()
    assert lines[0] == (
        "protocol,g_over_kappa,kappa_s_over_kappa,gamma_over_kappa,"
        "detuning_over_kappa,mean_fidelity,std_error,efficiency,n_samples,seed"
    )
    assert len(lines) == 1 + 3 * 2
    records = sweep(
        "phase-gate", [0.5, 1.0, 1.5], [0.0, 0.05],
        gamma_values=[0.1], n_samples=120, seed=9,
    )
    for line, rec in zip(lines[1:], records):
        cells = line.split(",")
        assert cells[0] == rec.protocol
        assert int(cells[8]) == rec.n_samples
        assert int(cells[9]) == rec.seed
        for cell, field in zip(cells[1:8], FIELDS[1:8]):
            # round-trip at the printed 9-significant-digit precision
            assert float(cell) == float(f"{getattr(rec, field):.9g}")


def test_sweep_is_byte_identical_across_invocations(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli(SWEEP_ARGS + ["--out", str(a)]) == 0
    assert run_cli(SWEEP_ARGS + ["--out", str(b)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_sweep_json_matches_csv(tmp_path, capsys):
    csv_file, json_file = tmp_path / "r.csv", tmp_path / "r.json"
    assert run_cli(SWEEP_ARGS + ["--out", str(csv_file)]) == 0
    assert run_cli(SWEEP_ARGS + ["--out", str(json_file), "--format", "json"]) == 0
    capsys.readouterr()
    payload = json.loads(json_file.read_text())
    lines = csv_file.read_text().splitlines()[1:]
    assert len(payload) == len(lines)
    for obj, line in zip(payload, lines):
        assert list(obj) == list(FIELDS)
        cells = line.split(",")
        assert obj["protocol"] == cells[0]
        assert obj["mean_fidelity"] == float(cells[5])
        assert obj["n_samples"] == int(cells[8])


def test_sweep_rejects_zero_steps(capsys):
    code = run_cli(
        ["sweep", "--protocol", "phase-gate", "--g-min", "0.1", "--g-max", "1.0",
         "--g-steps", "0", "--out", "ignored.csv"]
    )
    assert code == 2
    assert "g-steps" in capsys.readouterr().err


def test_sweep_kappa_s_range_syntax(tmp_path, capsys):
    out_file = tmp_path / "r.csv"
    code = run_cli(
        ["sweep", "--protocol", "phase-gate", "--g-min", "1", "--g-max", "1",
         "--g-steps", "1", "--kappa-s", "0/0.1/3", "--samples", "40",
         "--seed", "1", "--out", str(out_file)]
    )
    assert code == 0
    capsys.readouterr()
    lines = out_file.read_text().splitlines()
    assert len(lines) == 4
    assert [line.split(",")[2] for line in lines[1:]] == ["0", "0.05", "0.1"]


def test_sweep_unwritable_path_exits_4(tmp_path, capsys):
    target = tmp_path / "missing" / "out.csv"
    code = run_cli(SWEEP_ARGS + ["--out", str(target)])
    assert code == 4
    assert "cannot write" in capsys.readouterr().err


def test_verify_passes_and_reports(capsys):
    assert run_cli(["verify", "--protocol", "phase-gate"]) == 0
    out = capsys.readouterr().out
    assert "gate == diag(1,1,1,-1): PASS" in out
    assert "FAIL" not in out
    assert run_cli(["verify", "--protocol", "cnot"]) == 0
    out = capsys.readouterr().out
    assert out.count("gate == CNOT permutation: PASS") == 4


def test_verify_catches_flipped_waveplate_sign(monkeypatch, capsys):
    from spincavity import optics
    from spincavity.statevec import CIRCULAR, Operator

    flipped = optics.hwp1().matrix.copy()
    flipped[1, 1] = -flipped[1, 1]
    monkeypatch.setattr(
        optics, "hwp1", lambda: Operator(flipped, requires_frame=CIRCULAR)
    )
    assert run_cli(["verify"]) == 1
    assert "FAIL" in capsys.readouterr().out
