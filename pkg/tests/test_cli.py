"""Command-line interface: determinism, schema, exit codes, outputs."""

import json
from importlib import resources

import jsonschema
import numpy as np
import pytest

from logkdv import cli
from logkdv.errors import NumericalError


def load_schema():
    with resources.files("logkdv").joinpath("summary_schema.json").open() as fh:
        return json.load(fh)


def read_summary(outdir, name):
    with open(outdir / f"{name}_summary.json") as fh:
        return json.load(fh)


def run(args):
    return cli.main([str(a) for a in args])


SCHEMA = load_schema()


class TestProjectionsCommand:
    def test_known_head_values_in_csv(self, tmp_path):
        assert run(["projections", "--n-max", 1, "--outdir", tmp_path]) == 0
        lines = (tmp_path / "projections.csv").read_text().strip().splitlines()
        assert lines[0] == "n,f_n"
        n0, f0 = lines[1].split(",")
        n1, f1 = lines[2].split(",")
        assert float(f0) == pytest.approx(2.50663, abs=1e-5)
        assert float(f1) == 2.0
        assert len(lines) == 3

    def test_summary_validates(self, tmp_path):
        run(["projections", "--outdir", tmp_path])
        doc = read_summary(tmp_path, "projections")
        jsonschema.validate(doc, SCHEMA)

    def test_deterministic_output(self, tmp_path):
        d1, d2 = tmp_path / "a", tmp_path / "b"
        run(["projections", "--n-max", 2000, "--outdir", d1])
        run(["projections", "--n-max", 2000, "--outdir", d2])
        assert (d1 / "projections.csv").read_bytes() == (d2 / "projections.csv").read_bytes()
        assert (
            (d1 / "projections_summary.json").read_bytes()
            == (d2 / "projections_summary.json").read_bytes()
        )


class TestSpectrumCommand:
    def test_eigenvalues_in_summary(self, tmp_path):
        assert run(
            ["spectrum", "--z-max", 8.0, "--n-max", 500, "--outdir", tmp_path]
        ) == 0
        doc = read_summary(tmp_path, "spectrum")
        jsonschema.validate(doc, SCHEMA)
        assert doc["scalars"]["z1"] == pytest.approx(2.7054, abs=1e-3)
        assert doc["scalars"]["z2"] == pytest.approx(6.1540, abs=1e-3)
        assert doc["scalars"]["E1"] == pytest.approx(5.4109, abs=2e-3)
        assert all(doc["invariants"].values())

    def test_csv_traces_written(self, tmp_path):
        run(["spectrum", "--z-max", 8.0, "--n-max", 500, "--outdir", tmp_path])
        scan = (tmp_path / "wronskian_scan.csv").read_text().splitlines()
        trace = (tmp_path / "wronskian_trace.csv").read_text().splitlines()
        assert scan[0] == "z,W_inf"
        assert trace[0] == "n,W_n"
        assert len(trace) == 501


class TestEvolveCommand:
    def test_zero_horizon_is_identity(self, tmp_path):
        assert run(["evolve", "--T", 0, "--n-modes", 50, "--outdir", tmp_path]) == 0
        lines = (tmp_path / "evolve.csv").read_text().strip().splitlines()
        assert lines[0] == "t,norm,c1,drift"
        assert len(lines) == 2  # header + the initial sample only
        t, norm, c1, drift = (float(v) for v in lines[1].split(","))
        assert (t, c1, drift) == (0.0, 0.0, 0.0)

    def test_short_run_summary(self, tmp_path):
        assert run(
            [
                "evolve",
                "--T", 0.5,
                "--n-modes", 100,
                "--dt", 1e-3,
                "--outdir", tmp_path,
            ]
        ) == 0
        doc = read_summary(tmp_path, "evolve")
        jsonschema.validate(doc, SCHEMA)
        assert doc["invariants"]["norm_conserved"]
        assert doc["scalars"]["max_norm_drift"] < 1e-8


class TestDissipateCommand:
    def test_summary_and_csv(self, tmp_path):
        assert run(
            [
                "dissipate",
                "--T", 0.5,
                "--extent", 20.0,
                "--spacing", 0.05,
                "--dt", 2e-3,
                "--outdir", tmp_path,
            ]
        ) == 0
        doc = read_summary(tmp_path, "dissipate")
        jsonschema.validate(doc, SCHEMA)
        assert doc["invariants"]["l2_monotone"]
        assert doc["invariants"]["constraint_conserved"]
        header = (tmp_path / "dissipate.csv").read_text().splitlines()[0]
        assert header == "t,l2_norm,h1_seminorm,linf_norm,a,b,A"


class TestCoercivityCommand:
    def test_summary(self, tmp_path):
        assert run(
            ["coercivity", "--n-max", 100, "--n-samples", 50, "--outdir", tmp_path]
        ) == 0
        doc = read_summary(tmp_path, "coercivity")
        jsonschema.validate(doc, SCHEMA)
        assert 0.0 < doc["scalars"]["coercivity_constant"] < 1.0
        assert all(doc["invariants"].values())


class TestReconstructCommand:
    def test_eigenvector_mode(self, tmp_path):
        assert run(
            [
                "reconstruct",
                "--z", 2.705497,
                "--m-max", 200,
                "--outdir", tmp_path,
            ]
        ) == 0
        doc = read_summary(tmp_path, "reconstruct")
        jsonschema.validate(doc, SCHEMA)
        assert doc["invariants"]["odd_parity"]
        assert doc["invariants"]["weak_residuals_small"]
        header = (tmp_path / "eigenvector_profile.csv").read_text().splitlines()[0]
        assert header == "x,y_odd,y_even"

    def test_bump_mode(self, tmp_path):
        assert run(
            ["reconstruct", "--mode", "bump", "--num-points", 1201, "--outdir", tmp_path]
        ) == 0
        doc = read_summary(tmp_path, "reconstruct")
        assert doc["invariants"]["parseval"]


class TestConfigHandling:
    def test_config_file_overridden_by_flag(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"n_max": 5}))
        assert run(
            ["projections", "--config", cfg, "--n-max", 3, "--outdir", tmp_path]
        ) == 0
        doc = read_summary(tmp_path, "projections")
        assert doc["config"]["n_max"] == 3

    def test_unknown_config_key_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"bogus": 1}))
        assert run(["projections", "--config", cfg, "--outdir", tmp_path]) == 1
        err = capsys.readouterr().err
        assert err.startswith("error:") and "\n" not in err.strip()

    def test_out_of_range_value_rejected(self, tmp_path):
        assert run(["spectrum", "--scan-step", -0.1, "--outdir", tmp_path]) == 1

    def test_missing_config_file(self, tmp_path):
        assert run(
            ["projections", "--config", tmp_path / "nope.json", "--outdir", tmp_path]
        ) == 1

    def test_outdir_env_var(self, tmp_path, monkeypatch):
        monkeypatch.setenv("LOGKDV_OUTDIR", str(tmp_path / "envout"))
        assert run(["projections", "--n-max", 1]) == 0
        assert (tmp_path / "envout" / "projections.csv").exists()

    def test_numerical_failure_exit_code(self, tmp_path, monkeypatch, capsys):
        def boom(config, outdir):
            raise NumericalError("synthetic failure")

        monkeypatch.setitem(cli._RUNNERS, "projections", boom)
        assert run(["projections", "--outdir", tmp_path]) == 2
        assert capsys.readouterr().err.startswith("error:")
