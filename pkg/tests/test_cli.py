"""End-to-end tests of the command-line front end."""

import json

import pandas as pd
import pytest

from magnomech.cli import (
    main, EXIT_OK, EXIT_CONFIG, EXIT_CONVERGENCE, EXIT_IO, EXIT_VALIDATION,
)
from magnomech.presets import TARGET_EFFECTIVE_COUPLING

# preset base point, reached without a preset so explicit axes are allowed
BASE_SYSTEM = {"gamma_b_over_2pi_Hz": 100.0}


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    monkeypatch.delenv("MAGNOMECH_WORKERS", raising=False)
    monkeypatch.delenv("MAGNOMECH_OUTPUT_DIR", raising=False)


def _config(tmp_path, data, name="run.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


class TestSteadyState:
    """steady-state subcommand."""

    def test_preset_point(self, tmp_path, capsys):
        out = tmp_path / "ss.json"
        assert main(["steady-state", "--preset", "base-point", "--out", str(out)]) == EXIT_OK
        printed = json.loads(capsys.readouterr().out)
        written = json.loads(out.read_text(encoding="utf-8"))
        assert printed == written
        assert written["iterations"] == 1
        assert written["effective_coupling"] == pytest.approx(TARGET_EFFECTIVE_COUPLING, rel=1e-12)

    def test_dump_matrices(self, tmp_path):
        out = tmp_path / "ss.json"
        code = main(["steady-state", "--preset", "base-point", "--out", str(out), "--dump-matrices"])
        assert code == EXIT_OK
        assert (tmp_path / "base-point_M.csv").exists()
        assert (tmp_path / "base-point_D.csv").exists()

    def test_convergence_failure(self, tmp_path, capsys):
        path = _config(tmp_path, {"system": {"delta_m0_over_2pi_Hz": 1e7}, "tolerances": {"max_iter": 1}})
        assert main(["steady-state", "--config", path]) == EXIT_CONVERGENCE
        assert "did not converge" in capsys.readouterr().err

    def test_unwritable_output(self, tmp_path):
        out = tmp_path / "missing" / "ss.json"
        assert main(["steady-state", "--preset", "base-point", "--out", str(out)]) == EXIT_IO


class TestConfigErrors:
    """Exit code 2 for configuration problems."""

    def test_missing_config(self, tmp_path):
        assert main(["steady-state", "--config", str(tmp_path / "nope.json")]) == EXIT_CONFIG

    def test_sweep_without_axes(self):
        assert main(["sweep", "--preset", "base-point"]) == EXIT_CONFIG

    def test_bad_worker_count(self):
        assert main(["steady-state", "--preset", "base-point", "--workers", "0"]) == EXIT_CONFIG

    def test_schema_violation(self, tmp_path):
        path = _config(tmp_path, {"system": {"omega_b": "fast"}})
        assert main(["steady-state", "--config", path]) == EXIT_CONFIG

    def test_unknown_preset_rejected_by_parser(self):
        with pytest.raises(SystemExit):
            main(["steady-state", "--preset", "no-such-preset"])


class TestSweep:
    """sweep and stability subcommands on small grids."""

    @pytest.fixture
    def xi_config(self, tmp_path):
        return _config(tmp_path, {
            "system": BASE_SYSTEM,
            "sweep": {"axis1": {"name": "xi", "start": 0.0, "stop": 0.3, "count": 3, "unit": "omega_b"},
                      "pairs": [["c2", "c1"], ["c2", "m"]]},
        })

    def test_sweep_csv(self, tmp_path, xi_config):
        out = tmp_path / "xi.csv"
        assert main(["sweep", "--config", xi_config, "--out", str(out), "--quiet"]) == EXIT_OK
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "# preset: none"
        frame = pd.read_csv(out, comment="#")
        assert len(frame) == 3
        assert list(frame["status"]) == ["ok"] * 3
        assert "EN_c2_m" in frame.columns

    def test_stability_map(self, tmp_path, xi_config):
        out = tmp_path / "stab.csv"
        assert main(["stability", "--config", xi_config, "--out", str(out), "--quiet"]) == EXIT_OK
        frame = pd.read_csv(out, comment="#")
        assert "max_real_eig" in frame.columns
        assert not any(c.startswith("EN_") for c in frame.columns)

    def test_single_point_stability(self, capsys):
        assert main(["stability", "--preset", "base-point"]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["stable"] is True
        assert report["max_real_eig_over_omega_b"] < 0
        assert len(report["eigenvalues"]) == 8

    def test_short_preset_name(self, tmp_path, monkeypatch):
        monkeypatch.setattr("magnomech.presets.GRID_2D", 4)
        out = tmp_path / "fig2a.csv"
        assert main(["sweep", "--preset", "fig2a", "--out", str(out), "--quiet", "--workers", "2"]) == EXIT_OK
        assert out.read_text(encoding="utf-8").splitlines()[0] == "# preset: delta1-deltam-map"
        frame = pd.read_csv(out, comment="#")
        assert len(frame) == 16
        assert {"delta_1", "delta_m", "EN_c2_c1", "EN_c2_m", "EN_c2_b"} <= set(frame.columns)

    def test_short_stability_preset_name(self, tmp_path, monkeypatch):
        monkeypatch.setattr("magnomech.presets.GRID_2D", 3)
        out = tmp_path / "fig7a.csv"
        assert main(["stability", "--preset", "fig7a", "--out", str(out), "--quiet"]) == EXIT_OK
        frame = pd.read_csv(out, comment="#")
        assert len(frame) == 9
        assert "max_real_eig" in frame.columns

    def test_save_config_round_trip(self, tmp_path, xi_config):
        saved = tmp_path / "effective.json"
        first = tmp_path / "first.csv"
        second = tmp_path / "second.csv"
        assert main(["sweep", "--config", xi_config, "--out", str(first), "--quiet",
                     "--save-config", str(saved)]) == EXIT_OK
        assert main(["sweep", "--config", str(saved), "--out", str(second), "--quiet"]) == EXIT_OK
        assert first.read_bytes() == second.read_bytes()


class TestValidate:
    """validate subcommand."""

    def test_passes(self, tmp_path):
        path = _config(tmp_path, {"tolerances": {"validation_draws": 5, "time_integration_instances": 2}})
        out = tmp_path / "props.json"
        assert main(["validate", "--preset", "base-point", "--config", path, "--out", str(out)]) == EXIT_OK
        summary = json.loads(out.read_text(encoding="utf-8"))
        assert summary["all_passed"] is True
        assert summary["failed"] == 0

    def test_corrupted_tolerance(self, tmp_path):
        path = _config(tmp_path, {"tolerances": {"validation_draws": 5, "time_integration_instances": 2,
                                                "symplectic_match": -1.0}})
        assert main(["validate", "--preset", "base-point", "--config", path]) == EXIT_VALIDATION
