"""Command-line front end: determinism, formats, exit codes."""

import json
import subprocess
import sys

import pytest

BE9 = {
    "mass_kg": 1.494e-26,
    "zeta": 1.494e-26 * 6e3,
    "tau_s": 1e-10,
    "sigma_m": 1e-10,
    "d_m": 1e-2,
    "temperature_K": 0.0,
}

# reduces to kappa = 1, scale_time = 1 s, tau_hat = 0.01, d_hat = 1000
LAB = {
    "mass_kg": 1.054571817e-16,
    "zeta": 1.054571817e-16,
    "tau_s": 0.01,
    "sigma_m": 1e-9,
    "d_m": 1e-6,
    "temperature_K": 0.0,
}


def run_cli(*args, config=None, tmp_path=None):
    argv = [sys.executable, "-m", "qbrownian"]
    if config is not None:
        path = tmp_path / "config.json"
        path.write_text(json.dumps(config))
        argv += ["--config", str(path)]
    argv += list(args)
    return subprocess.run(argv, capture_output=True, text=True)


class TestTauD:
    def test_ion_example(self, tmp_path):
        proc = run_cli("--command", "tau-d", "--output", "json", config=BE9, tmp_path=tmp_path)
        assert proc.returncode == 0, proc.stderr
        doc = json.loads(proc.stdout)
        row = dict(zip(doc["columns"], doc["rows"][0]))
        assert row["tau0_s"] == pytest.approx(7.70338357036e-16, rel=1e-9)
        assert row["tau_d_s"] < row["tau0_s"]
        assert row["method"] == "root_find_exact"

    def test_requires_memory_bath(self, tmp_path):
        config = dict(BE9, tau_s=0.0)
        proc = run_cli("--command", "tau-d", config=config, tmp_path=tmp_path)
        assert proc.returncode == 2
        assert "single-relaxation-time" in proc.stderr


class TestVfun:
    def test_log_grid_reference_row(self, tmp_path):
        proc = run_cli(
            "--command", "vfun", "--grid", "1e-3,1e3,7,log", config={}, tmp_path=tmp_path
        )
        assert proc.returncode == 0, proc.stderr
        lines = proc.stdout.strip().split("\n")
        assert lines[0] == "x,v,method,est_error"
        row = dict(zip(lines[0].split(","), lines[4].split(",")))
        assert float(row["x"]) == 1.0
        assert float(row["v"]) == pytest.approx(0.526802, abs=5e-7)

    def test_log_grid_requires_positive_start(self, tmp_path):
        proc = run_cli("--command", "vfun", "--grid", "0,10,5,log", config={}, tmp_path=tmp_path)
        assert proc.returncode == 2
        assert "log grid" in proc.stderr


class TestMsd:
    def test_first_row_exactly_zero(self, tmp_path):
        proc = run_cli(
            "--command", "msd", "--grid", "0,1e-5,2,lin", config=BE9, tmp_path=tmp_path
        )
        assert proc.returncode == 0, proc.stderr
        lines = proc.stdout.strip().split("\n")
        assert lines[0] == "t_s,t_reduced,s_m2,s_reduced,method"
        first = lines[1].split(",")
        assert first[2] == "0.0"
        assert first[4] == "closed_form"

    def test_finite_temperature_method_column(self, tmp_path):
        config = dict(LAB, temperature_K=1e-12)
        proc = run_cli(
            "--command", "msd", "--grid", "0.5,1.0,2,lin", config=config, tmp_path=tmp_path
        )
        assert proc.returncode == 0, proc.stderr
        assert "quadrature" in proc.stdout

    def test_determinism(self, tmp_path):
        args = ("--command", "msd", "--grid", "1e-6,1e-3,9,log")
        first = run_cli(*args, config=BE9, tmp_path=tmp_path)
        second = run_cli(*args, config=BE9, tmp_path=tmp_path)
        assert first.returncode == second.returncode == 0
        assert first.stdout == second.stdout

    def test_csv_round_trip(self, tmp_path):
        proc = run_cli(
            "--command", "msd", "--grid", "1e-6,1e-3,9,log", config=BE9, tmp_path=tmp_path
        )
        lines = proc.stdout.strip().split("\n")
        for line in lines[1:]:
            for token in line.split(",")[:4]:
                value = float(token)
                assert repr(value) == token


class TestProfileAndWidth:
    def test_profile_rows(self, tmp_path):
        config = dict(LAB, d_m=12e-9, time_s=0.5)
        proc = run_cli(
            "--command", "profile", "--grid=-1e-8,1e-8,41,lin", config=config, tmp_path=tmp_path
        )
        assert proc.returncode == 0, proc.stderr
        lines = proc.stdout.strip().split("\n")
        assert lines[0] == "x_m,x_reduced,P_per_m,P_reduced"
        assert len(lines) == 42
        values = [float(line.split(",")[2]) for line in lines[1:]]
        assert all(v >= -1e-12 for v in values)

    def test_width_initial_value(self, tmp_path):
        proc = run_cli(
            "--command", "width", "--grid", "0,1,3,lin", config=LAB, tmp_path=tmp_path
        )
        lines = proc.stdout.strip().split("\n")
        first = dict(zip(lines[0].split(","), lines[1].split(",")))
        assert float(first["w2_m2"]) == 1e-18  # sigma^2 at t = 0
        assert float(first["w2_reduced"]) == 1.0

    def test_attenuation_decays_from_one(self, tmp_path):
        proc = run_cli(
            "--command", "attenuation", "--grid", "0,0.02,5,lin", config=LAB, tmp_path=tmp_path
        )
        assert proc.returncode == 0, proc.stderr
        lines = proc.stdout.strip().split("\n")
        assert lines[0] == "t_s,t_reduced,a,method"
        values = [float(line.split(",")[2]) for line in lines[1:]]
        assert values[0] == 1.0
        assert all(b < a for a, b in zip(values, values[1:]))
        assert all(0.0 < v <= 1.0 for v in values)

    def test_tolerance_flags_accepted(self, tmp_path):
        config = dict(LAB, temperature_K=1e-12)
        proc = run_cli(
            "--command", "msd", "--grid", "0.5,1.0,2,lin",
            "--rel-tol", "1e-7", "--abs-tol", "1e-12",
            config=config, tmp_path=tmp_path,
        )
        assert proc.returncode == 0, proc.stderr
        assert "quadrature" in proc.stdout

    def test_bad_tolerance_rejected(self, tmp_path):
        proc = run_cli(
            "--command", "msd", "--grid", "0,1,2,lin", "--rel-tol", "0",
            config=LAB, tmp_path=tmp_path,
        )
        assert proc.returncode == 2
        assert "rel_tol" in proc.stderr


class TestSweep:
    def test_tau_sweep_decoherence_times_increase(self, tmp_path):
        config = dict(LAB)
        config["tau_s"] = [1e-4, 1e-3, 1e-2]
        proc = run_cli("--command", "sweep", config=config, tmp_path=tmp_path)
        assert proc.returncode == 0, proc.stderr
        lines = proc.stdout.strip().split("\n")
        header = lines[0].split(",")
        rows = [dict(zip(header, line.split(","))) for line in lines[1:]]
        assert [float(r["value"]) for r in rows] == [1e-4, 1e-3, 1e-2]
        tau_ds = [float(r["tau_d_s"]) for r in rows]
        tau_0s = [float(r["tau0_s"]) for r in rows]
        assert tau_ds[0] < tau_ds[1] < tau_ds[2]
        assert all(d < z for d, z in zip(tau_ds, tau_0s))

    def test_temperature_sweep_zero_matches_plain_command(self, tmp_path):
        config = dict(LAB, observable="msd")
        config["temperature_K"] = [0.0]
        sweep = run_cli(
            "--command", "sweep", "--grid", "0.1,1.0,4,lin", config=config, tmp_path=tmp_path
        )
        plain = run_cli(
            "--command", "msd", "--grid", "0.1,1.0,4,lin", config=LAB, tmp_path=tmp_path
        )
        assert sweep.returncode == plain.returncode == 0
        sweep_rows = [line.split(",")[2:] for line in sweep.stdout.strip().split("\n")[1:]]
        plain_rows = [line.split(",") for line in plain.stdout.strip().split("\n")[1:]]
        assert sweep_rows == plain_rows

    def test_separation_sweep_halves_tau0(self, tmp_path):
        config = dict(LAB)
        config["d_m"] = [5e-7, 1e-6]
        proc = run_cli("--command", "sweep", config=config, tmp_path=tmp_path)
        lines = proc.stdout.strip().split("\n")
        header = lines[0].split(",")
        rows = [dict(zip(header, line.split(","))) for line in lines[1:]]
        assert float(rows[1]["tau0_s"]) == pytest.approx(
            float(rows[0]["tau0_s"]) / 2.0, rel=1e-12
        )

    def test_two_ranged_parameters_rejected(self, tmp_path):
        config = dict(LAB)
        config["tau_s"] = [1e-4, 1e-3]
        config["d_m"] = [10.0, 20.0]
        proc = run_cli("--command", "sweep", config=config, tmp_path=tmp_path)
        assert proc.returncode == 2
        assert "exactly one ranged parameter" in proc.stderr


class TestValidation:
    def test_underdamped_rejected_with_constraint_named(self, tmp_path):
        config = dict(LAB, tau_s=0.3)
        proc = run_cli("--command", "msd", "--grid", "0,1,2,lin", config=config, tmp_path=tmp_path)
        assert proc.returncode == 2
        assert "4*zeta*tau/m" in proc.stderr

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{broken")
        proc = run_cli("--config", str(path), "--command", "msd", "--grid", "0,1,2,lin")
        assert proc.returncode == 2
        assert "malformed JSON" in proc.stderr

    def test_missing_field_named(self, tmp_path):
        config = {k: v for k, v in BE9.items() if k != "sigma_m"}
        proc = run_cli("--command", "msd", "--grid", "0,1,2,lin", config=config, tmp_path=tmp_path)
        assert proc.returncode == 2
        assert "sigma_m" in proc.stderr

    def test_unknown_command(self, tmp_path):
        proc = run_cli("--command", "everything", config=BE9, tmp_path=tmp_path)
        assert proc.returncode == 2

    def test_grid_count_bounds(self, tmp_path):
        proc = run_cli("--command", "msd", "--grid", "0,1,1,lin", config=BE9, tmp_path=tmp_path)
        assert proc.returncode == 2
        assert "count" in proc.stderr

    def test_json_output_shape(self, tmp_path):
        proc = run_cli(
            "--command", "commutator", "--grid", "0,1,3,lin", "--output", "json",
            config=LAB, tmp_path=tmp_path,
        )
        doc = json.loads(proc.stdout)
        assert doc["command"] == "commutator"
        assert doc["columns"] == ["t_s", "t_reduced", "C_m2", "C_reduced"]
        assert len(doc["rows"]) == 3
