"""End-to-end tests of the horizon-risk command line."""

import json

import numpy as np
import pytest

from horizon_risk import cli
from horizon_risk.cli import EXIT_COMPUTE, EXIT_CONFIG, EXIT_OK, golden_checks, main
from horizon_risk.export import CSV_COLUMNS, read_sweep_csv, write_sweep_csv
from horizon_risk.evaluation.report import RiskEstimate


@pytest.fixture(autouse=True)
def _serial(monkeypatch):
    monkeypatch.setenv("HORIZON_RISK_THREADS", "1")


def _sweep(tmp_path, name, *extra):
    out = tmp_path / name
    argv = [
        "sweep", "--denoiser", "box", "--contour", "const:0.5", "--n", "8,12,16",
        "--sigma", "0.5", "--trials", "4", "--tuning-trials", "2", "--seed", "7",
        "--output", str(out), *extra,
    ]
    assert main(argv) == EXIT_OK
    return out


class TestSelftest:
    def test_exits_zero(self, capsys):
        assert main(["selftest"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "FAIL" not in out
        assert "all golden values match" in out

    def test_goldens_within_tolerance(self):
        for name, computed, expected, tol in golden_checks():
            assert abs(computed - expected) <= tol, name


class TestSweep:
    def test_writes_csv_and_metadata(self, tmp_path):
        out = _sweep(tmp_path, "sweep.csv", "--plot")
        lines = out.read_text().splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 4
        meta = json.loads(out.with_suffix(".json").read_text())
        assert meta["master_seed"] == 7
        assert "Philox" in meta["generator"]
        assert meta["config"]["n_values"] == [8, 12, 16]
        assert "box" in meta["fits"]
        plot = out.with_suffix(".gp").read_text()
        assert "set logscale xy" in plot
        assert "minimax" in plot

    def test_csv_is_byte_identical_on_replay(self, tmp_path):
        first = _sweep(tmp_path, "a.csv")
        second = _sweep(tmp_path, "b.csv")
        assert first.read_bytes() == second.read_bytes()

    def test_csv_reads_back_exactly(self, tmp_path):
        out = _sweep(tmp_path, "sweep.csv")
        rows = read_sweep_csv(out)
        assert [r["n"] for r in rows] == [8, 12, 16]
        assert all(r["bias_sq"] + r["variance"] == pytest.approx(r["mean_risk"]) for r in rows)


class TestFit:
    def test_exact_power_law(self, tmp_path, capsys):
        estimates = [
            RiskEstimate(
                n=n, sigma=0.5, denoiser="box", trials=10, master_seed=0,
                mean_risk=3.0 * n ** (-2 / 3), stderr=1e-4, bias_sq=0.0, variance=3.0 * n ** (-2 / 3),
                slope_ref=-2 / 3,
            )
            for n in (32, 64, 128, 256)
        ]
        path = write_sweep_csv(estimates, tmp_path / "law.csv")
        assert main(["fit", "--input", str(path)]) == EXIT_OK
        assert "box: slope -0.6667" in capsys.readouterr().out

    def test_bad_csv(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("n,risk\n16,0.1\n")
        assert main(["fit", "--input", str(path)]) == EXIT_CONFIG


class TestOtherCommands:
    def test_render(self, tmp_path):
        out = tmp_path / "grid.csv"
        assert main(["render", "--n", "8", "--contour", "half", "--output", str(out)]) == EXIT_OK
        grid = np.loadtxt(out, delimiter=",")
        assert grid.shape == (8, 8)
        assert grid[:, :4] == pytest.approx(np.ones((8, 4)))

    def test_denoise(self, tmp_path, capsys):
        out = tmp_path / "est.csv"
        argv = ["denoise", "--n", "16", "--denoiser", "wavelet", "--sigma", "0.5", "--output", str(out)]
        assert main(argv) == EXIT_OK
        assert "risk" in capsys.readouterr().out
        assert out.exists()

    def test_diagnose(self, tmp_path, capsys):
        out = tmp_path / "edge.json"
        argv = [
            "diagnose", "--n", "16", "--denoiser", "snlm", "--sigma", "1.0",
            "--trials", "2", "--output", str(out),
        ]
        assert main(argv) == EXIT_OK
        assert json.loads(out.read_text())["fraction_passing_J"] == 1.0
        assert "1 by construction" in capsys.readouterr().out


class TestConfigErrors:
    @pytest.mark.parametrize(
        "argv",
        [
            ["sweep", "--denoiser", "box", "--n", "16,32"],
            ["sweep", "--denoiser", "median", "--n", "16,32,64"],
            ["sweep", "--denoiser", "box", "--n", "16,32,64", "--sigma", "-1"],
            ["sweep", "--denoiser", "box", "--n", "16,x,64"],
            ["render", "--n", "8", "--contour", "const:0.95"],
            ["frobnicate"],
        ],
    )
    def test_exit_one(self, argv, tmp_path):
        assert main([*argv]) == EXIT_CONFIG

    def test_bad_thread_setting(self, monkeypatch, tmp_path):
        monkeypatch.setenv("HORIZON_RISK_THREADS", "zero")
        argv = [
            "sweep", "--denoiser", "identity", "--n", "8,12,16", "--trials", "2",
            "--output", str(tmp_path / "s.csv"),
        ]
        assert main(argv) == EXIT_CONFIG

    def test_missing_fit_input(self, tmp_path, capsys):
        assert main(["fit", "--input", str(tmp_path / "missing.csv")]) == EXIT_CONFIG
        err = capsys.readouterr().err
        assert "missing.csv" in err
        assert "Traceback" not in err

    def test_unwritable_output_rejected_before_sweep(self, tmp_path, monkeypatch, capsys):
        blocker = tmp_path / "blocker"
        blocker.write_text("not a directory\n")

        def _no_sweep(*args, **kwargs):
            raise AssertionError("sweep ran before the output path was checked")

        monkeypatch.setattr(cli, "rate_sweep", _no_sweep)
        argv = [
            "sweep", "--denoiser", "identity", "--n", "8,12,16", "--trials", "2",
            "--output", str(blocker / "sub" / "s.csv"),
        ]
        assert main(argv) == EXIT_CONFIG
        err = capsys.readouterr().err.strip()
        assert err.startswith("horizon-risk: configuration error: cannot create output directory")
        assert len(err.splitlines()) == 1

    def test_output_is_directory(self, tmp_path):
        assert main(["render", "--n", "8", "--output", str(tmp_path)]) == EXIT_CONFIG

    def test_write_failure_is_one_line(self, tmp_path, monkeypatch, capsys):
        def _disk_full(*args, **kwargs):
            raise OSError(28, "No space left on device")

        monkeypatch.setattr(cli, "write_grid_csv", _disk_full)
        assert main(["render", "--n", "8", "--output", str(tmp_path / "r.csv")]) == EXIT_COMPUTE
        err = capsys.readouterr().err.strip()
        assert err == "horizon-risk: I/O error: [Errno 28] No space left on device"
