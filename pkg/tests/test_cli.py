import numpy as np
import pytest

import stablevar as sv
from stablevar.cli import main

MODEL_CFG = """\
dim = 2
order = 2
a1 = 0.1, 0.3, 0.2, 0.1
a2 = 0.2, 0.2, 0.05, 0.1
alpha = 1.6
sigma = 1.0
n = 300
burn_in = 100
seed = 21
"""

MC_CFG = """\
dim = 2
order = 2
a1 = 0.1, 0.3, 0.2, 0.1
a2 = 0.2, 0.2, 0.05, 0.1
alpha = 1.6
n = 120
burn_in = 50
b_values = 0.55
replications = 5
seed = 9
methods = floc, ls
"""


@pytest.fixture()
def model_cfg(tmp_path):
    p = tmp_path / "model.cfg"
    p.write_text(MODEL_CFG)
    return p


class TestSimulate:
    def test_writes_series(self, model_cfg, tmp_path, capsys):
        out = tmp_path / "series.csv"
        assert main(["simulate", "--config", str(model_cfg), "--out", str(out)]) == 0
        series = sv.SeriesMatrix.from_csv(out)
        assert series.n == 300 and series.dim == 2
        assert "300x2" in capsys.readouterr().out

    def test_flag_overrides(self, model_cfg, tmp_path):
        out = tmp_path / "series.csv"
        main(["simulate", "--config", str(model_cfg), "--out", str(out), "--n", "50"])
        assert sv.SeriesMatrix.from_csv(out).n == 50

    def test_byte_identical_runs(self, model_cfg, tmp_path):
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["simulate", "--config", str(model_cfg), "--out", str(out1)])
        main(["simulate", "--config", str(model_cfg), "--out", str(out2)])
        assert out1.read_bytes() == out2.read_bytes()

    def test_missing_config_is_validation_error(self, tmp_path):
        code = main(["simulate", "--config", str(tmp_path / "nope.cfg"), "--out", str(tmp_path / "o.csv")])
        assert code == 1

    def test_bad_usage_is_validation_error(self):
        assert main(["simulate", "--config"]) == 1
        assert main(["frobnicate"]) == 1


class TestEstimate:
    def test_happy_path(self, model_cfg, tmp_path, capsys):
        data = tmp_path / "series.csv"
        main(["simulate", "--config", str(model_cfg), "--out", str(data)])
        report = tmp_path / "report.csv"
        summary = tmp_path / "summary.txt"
        code = main([
            "estimate", "--data", str(data), "--order", "2", "--method", "floc",
            "--b-exp", "0.55", "--out", str(report), "--summary", str(summary),
        ])
        assert code == 0
        method, coeffs = sv.EstimationReport.read_coeffs_csv(report)
        assert method == "floc" and len(coeffs) == 2
        assert "condition:" in summary.read_text()
        assert "method: floc" in capsys.readouterr().out

    def test_numerical_failure_exit_code(self, tmp_path):
        col = np.random.default_rng(0).standard_normal(100)
        sv.SeriesMatrix(np.column_stack([col, col])).to_csv(tmp_path / "dup.csv")
        code = main([
            "estimate", "--data", str(tmp_path / "dup.csv"), "--order", "1",
            "--method", "yw", "--out", str(tmp_path / "r.csv"),
        ])
        assert code == 2

    def test_short_series_validation_exit_code(self, tmp_path):
        sv.SeriesMatrix(np.ones((3, 1)) * np.arange(3)[:, None]).to_csv(tmp_path / "tiny.csv")
        code = main([
            "estimate", "--data", str(tmp_path / "tiny.csv"), "--order", "2",
            "--method", "ls", "--out", str(tmp_path / "r.csv"),
        ])
        assert code == 1


class TestMonteCarlo:
    def test_outputs_and_determinism(self, tmp_path):
        cfg = tmp_path / "mc.cfg"
        cfg.write_text(MC_CFG)
        d1, d2 = tmp_path / "run1", tmp_path / "run2"
        assert main(["montecarlo", "--config", str(cfg), "--out-dir", str(d1)]) == 0
        assert main(["montecarlo", "--config", str(cfg), "--out-dir", str(d2)]) == 0
        for name in ("floc_table.csv", "ls_table.csv", "cells_long.csv", "summary.txt"):
            assert (d1 / name).read_bytes() == (d2 / name).read_bytes()

    def test_seed_override_changes_output(self, tmp_path):
        cfg = tmp_path / "mc.cfg"
        cfg.write_text(MC_CFG)
        d1, d2 = tmp_path / "run1", tmp_path / "run2"
        main(["montecarlo", "--config", str(cfg), "--out-dir", str(d1)])
        main(["montecarlo", "--config", str(cfg), "--out-dir", str(d2), "--seed", "99"])
        assert (d1 / "cells_long.csv").read_bytes() != (d2 / "cells_long.csv").read_bytes()


class TestDiagnose:
    def test_full_workflow(self, model_cfg, tmp_path):
        data = tmp_path / "series.csv"
        main(["simulate", "--config", str(model_cfg), "--out", str(data)])
        report = tmp_path / "report.csv"
        main(["estimate", "--data", str(data), "--order", "2", "--method", "floc",
              "--b-exp", "0.55", "--out", str(report)])
        out = tmp_path / "diag"
        code = main([
            "diagnose", "--data", str(data), "--report", str(report),
            "--out-dir", str(out), "--seed", "4",
            "--ks-repetitions", "100", "--max-lag", "8",
            "--band-replicates", "20", "--qq-grid", "9",
        ])
        assert code == 0
        assert (out / "residuals.csv").exists()
        ks_text = (out / "ks.txt").read_text()
        assert "x1:" in ks_text and "x2:" in ks_text and "p_value=" in ks_text
        for j in (1, 2):
            af = (out / f"autofloc_x{j}.csv").read_text().splitlines()
            assert af[0] == "lag,value,band_lo,band_hi" and len(af) == 10
            qq = (out / f"qq_x{j}.csv").read_text().splitlines()
            assert qq[0] == "level,empirical,fitted" and len(qq) == 10
        res = sv.SeriesMatrix.from_csv(out / "residuals.csv")
        assert res.n == 298  # n - p rows

    def test_dimension_mismatch(self, model_cfg, tmp_path):
        data = tmp_path / "series.csv"
        main(["simulate", "--config", str(model_cfg), "--out", str(data)])
        bad = tmp_path / "bad_report.csv"
        bad.write_text("method,k,i,j,value\nfloc,1,1,1,0.5\n")
        code = main(["diagnose", "--data", str(data), "--report", str(bad),
                     "--out-dir", str(tmp_path / "d")])
        assert code == 1
