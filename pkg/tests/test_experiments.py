import numpy as np
import pytest

import stablevar as sv
from helpers import A1, A2, var2_model
from stablevar import experiments
from stablevar.errors import NumericalError, ValidationError
from stablevar.experiments import ExperimentConfig, coefficient_label

MC_CONFIG_TEXT = """\
# experiment description
dim = 2
order = 2
a1 = 0.1, 0.3, 0.2, 0.1      # row-major
a2 = 0.2, 0.2, 0.05, 0.1
alpha = 1.6
sigma = 1.0
n = 120
burn_in = 50
b_values = 0.0, 0.55
replications = 4
seed = 7
methods = floc, ls, yw
workers = 1
"""


def small_config(**overrides) -> ExperimentConfig:
    base = dict(
        model=var2_model(1.8),
        n=150,
        b_values=(0.55,),
        replications=6,
        seed=11,
        methods=("floc", "ls", "yw"),
        burn_in=100,
        workers=1,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


class TestConfigFile:
    def test_parse(self, tmp_path):
        path = tmp_path / "mc.cfg"
        path.write_text(MC_CONFIG_TEXT)
        cfg = sv.load_experiment_config(path)
        assert cfg.model.order == 2 and cfg.model.dim == 2
        assert np.array_equal(cfg.model.coeffs[0], A1)
        assert np.array_equal(cfg.model.coeffs[1], A2)
        assert cfg.model.noise.components[0].alpha == 1.6
        assert cfg.b_values == (0.0, 0.55)
        assert cfg.methods == ("floc", "ls", "yw")
        assert cfg.n == 120 and cfg.burn_in == 50 and cfg.seed == 7

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "mc.cfg"
        path.write_text(MC_CONFIG_TEXT + "bogus = 1\n")
        with pytest.raises(ValidationError, match="bogus"):
            sv.load_experiment_config(path)

    def test_missing_matrix(self, tmp_path):
        path = tmp_path / "mc.cfg"
        path.write_text("dim = 2\norder = 2\na1 = 0.1,0,0,0.1\nalpha=1.6\nn=50\nreplications=2\nseed=1\nb_values=0.5\n")
        with pytest.raises(ValidationError, match="a2"):
            sv.load_experiment_config(path)

    def test_wrong_matrix_size(self, tmp_path):
        path = tmp_path / "mc.cfg"
        path.write_text("dim = 2\norder = 1\na1 = 0.1, 0.2\nalpha = 1.6\nn = 50\nreplications = 2\nseed = 1\nb_values = 0.5\n")
        with pytest.raises(ValidationError, match="row-major"):
            sv.load_experiment_config(path)

    def test_duplicate_key(self, tmp_path):
        path = tmp_path / "mc.cfg"
        path.write_text("dim = 2\ndim = 3\n")
        with pytest.raises(ValidationError, match="duplicate"):
            sv.load_experiment_config(path)

    def test_model_config(self, tmp_path):
        path = tmp_path / "model.cfg"
        path.write_text("dim = 1\norder = 1\na1 = 0.5\nalpha = 2.0\nn = 30\nseed = 3\n")
        model, kv = sv.load_model_config(path)
        assert model.dim == 1 and model.order == 1
        assert kv["n"] == "30"


class TestExperimentConfigValidation:
    def test_floc_needs_b_values(self):
        with pytest.raises(ValidationError):
            small_config(b_values=())

    def test_negative_b(self):
        with pytest.raises(ValidationError):
            small_config(b_values=(-0.1,))

    def test_unknown_method(self):
        with pytest.raises(ValidationError):
            small_config(methods=("floc", "mle"))

    def test_ls_only_without_b_ok(self):
        cfg = small_config(methods=("ls",), b_values=())
        assert cfg.methods == ("ls",)


class TestCoefficientLabels:
    def test_column_major_block_layout(self):
        # A_1 = [[a1, a3], [a2, a4]], A_2 = [[a5, a7], [a6, a8]]
        assert coefficient_label(1, 1, 1, 2) == "a1"
        assert coefficient_label(1, 2, 1, 2) == "a2"
        assert coefficient_label(1, 1, 2, 2) == "a3"
        assert coefficient_label(1, 2, 2, 2) == "a4"
        assert coefficient_label(2, 1, 1, 2) == "a5"
        assert coefficient_label(2, 2, 1, 2) == "a6"
        assert coefficient_label(2, 1, 2, 2) == "a7"
        assert coefficient_label(2, 2, 2, 2) == "a8"


class TestRunMonteCarlo:
    def test_single_replication_rmse_is_abs_error(self):
        cfg = small_config(replications=1)
        report = sv.run_monte_carlo(cfg)
        for c in report.cells:
            assert c.rmse == pytest.approx(abs(c.mean - c.true_value), abs=1e-12)
            assert c.used == 1

    def test_rmse_lower_bound_invariant(self):
        report = sv.run_monte_carlo(small_config(replications=8))
        for c in report.cells:
            assert c.rmse >= abs(c.mean - c.true_value) - 1e-12

    def test_deterministic(self):
        a = sv.run_monte_carlo(small_config())
        b = sv.run_monte_carlo(small_config())
        assert a.cells == b.cells

    def test_parallel_equals_serial(self):
        a = sv.run_monte_carlo(small_config(workers=1))
        b = sv.run_monte_carlo(small_config(workers=4))
        assert a.cells == b.cells
        assert a.failures == b.failures

    def test_adding_methods_keeps_floc_cells(self):
        a = sv.run_monte_carlo(small_config(methods=("floc",)))
        b = sv.run_monte_carlo(small_config(methods=("floc", "ls")))
        floc_a = [c for c in a.cells if c.method == "floc"]
        floc_b = [c for c in b.cells if c.method == "floc"]
        assert floc_a == floc_b

    def test_failure_accounting(self, monkeypatch):
        real = experiments.estimate_floc
        calls = {"i": -1}

        def flaky(series, p, cfg, normalizer="window"):
            calls["i"] += 1
            if calls["i"] == 2:
                raise NumericalError("synthetic failure")
            return real(series, p, cfg, normalizer=normalizer)

        monkeypatch.setattr(experiments, "estimate_floc", flaky)
        report = sv.run_monte_carlo(small_config(replications=150))
        assert report.failed_replications == 1
        assert report.failures[("floc", 0.55)] == 1
        cell = report.cells[0]
        assert cell.used == 149

    def test_failure_rate_above_threshold_aborts(self, monkeypatch):
        def broken(series, p, cfg, normalizer="window"):
            raise NumericalError("synthetic failure")

        monkeypatch.setattr(experiments, "estimate_floc", broken)
        with pytest.raises(NumericalError, match="> 1%"):
            sv.run_monte_carlo(small_config(replications=10))

    def test_csv_outputs(self, tmp_path):
        report = sv.run_monte_carlo(small_config())
        wide = tmp_path / "floc.csv"
        report.to_wide_csv(wide, "floc")
        lines = wide.read_text().splitlines()
        assert lines[0] == "coefficient,true,B=0.55 mean,B=0.55 rmse"
        assert len(lines) == 9
        assert lines[1].startswith("a1,0.1,")
        long = tmp_path / "long.csv"
        report.to_long_csv(long)
        rows = long.read_text().splitlines()
        assert rows[0] == "method,b,coefficient,k,i,j,true,mean,rmse,used"
        assert len(rows) == 1 + 8 * 3  # 8 coefficients x (floc@B + ls + yw)
        assert "ls,," in rows[9]


class TestRunPipeline:
    def test_csv_roundtrip_matches_in_memory(self, tmp_path):
        series = sv.simulate(var2_model(1.6), 400, 200, 3)
        path = tmp_path / "data.csv"
        series.to_csv(path)
        from_file = sv.SeriesMatrix.from_csv(path)
        a = sv.run_pipeline(series, 2, b=0.5, rng_seed=1, ks_repetitions=100,
                            band_replicates=20, qq_grid=0)
        b = sv.run_pipeline(from_file, 2, b=0.5, rng_seed=1, ks_repetitions=100,
                            band_replicates=20, qq_grid=0)
        assert np.array_equal(a.estimation.coeff_array(), b.estimation.coeff_array())
        assert a.columns[0].ks.p_value == b.columns[0].ks.p_value

    def test_scalar_gaussian_noise_near_zero(self):
        spec = sv.SymmetricStableNoiseSpec.iid(1, 2.0)
        series = sv.sample_noise_matrix(spec, 600, 5)
        report = sv.run_pipeline(series, 1, rng_seed=2, ks_repetitions=100,
                                 band_replicates=20, qq_grid=0)
        assert abs(report.estimation.coeffs[0][0, 0]) < 0.12
        assert report.b_used == pytest.approx(report.alpha_estimates.max() - 1.05, abs=1e-12)

    def test_b_clamped_at_zero(self):
        # alpha estimates near 1 give a negative default B before clamping
        rng = np.random.default_rng(8)
        series = sv.SeriesMatrix(rng.standard_cauchy(200)[:, None])
        with pytest.warns(UserWarning):
            report = sv.run_pipeline(series, 1, rng_seed=3, ks_repetitions=100,
                                     band_replicates=10, qq_grid=0)
        assert report.b_used >= 0.0
