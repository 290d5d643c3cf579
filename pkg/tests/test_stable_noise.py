import numpy as np
import pytest

import stablevar as sv
from stablevar.errors import ValidationError


class TestStableParams:
    def test_alpha_range(self):
        sv.StableParams(2.0)
        sv.StableParams(0.5)
        with pytest.raises(ValidationError):
            sv.StableParams(0.0)
        with pytest.raises(ValidationError):
            sv.StableParams(2.1)

    def test_beta_sigma_ranges(self):
        with pytest.raises(ValidationError):
            sv.StableParams(1.5, beta=1.2)
        with pytest.raises(ValidationError):
            sv.StableParams(1.5, sigma=0.0)
        with pytest.raises(ValidationError):
            sv.StableParams(1.5, delta=float("nan"))

    def test_symmetric_constructor(self):
        p = sv.StableParams.symmetric(1.6, 2.0)
        assert p.beta == 0.0 and p.delta == 0.0 and p.is_symmetric

    def test_noise_spec_requires_symmetric(self):
        with pytest.raises(ValidationError):
            sv.SymmetricStableNoiseSpec((sv.StableParams(1.5, beta=0.5),))
        with pytest.raises(ValidationError):
            sv.SymmetricStableNoiseSpec(())
        spec = sv.SymmetricStableNoiseSpec.iid(3, 1.7)
        assert spec.dim == 3


class TestSampler:
    def test_rejects_skewed_params(self):
        with pytest.raises(ValidationError):
            sv.sample_sas(sv.StableParams(1.5, beta=0.3), 10, 0)
        with pytest.raises(ValidationError):
            sv.sample_sas(sv.StableParams(1.5, delta=1.0), 10, 0)

    def test_gaussian_case_variance(self):
        # exp{-(sigma t)^2} with sigma = 1/sqrt(2) is the standard normal
        p = sv.StableParams.symmetric(2.0, 1.0 / np.sqrt(2.0))
        x = sv.sample_sas(p, 10**5, 0)
        assert abs(x.var() - 1.0) < 0.05

    def test_ecf_single_point(self):
        x = sv.sample_sas(sv.StableParams.symmetric(1.6, 1.0), 10**5, 1)
        assert abs(np.cos(x).mean() - np.exp(-1.0)) < 0.01

    def test_median_symmetric(self):
        x = sv.sample_sas(sv.StableParams.symmetric(1.5, 1.0), 10**5, 2)
        assert abs(np.median(x)) < 0.02

    @pytest.mark.parametrize("alpha", [1.5, 1.6, 1.75, 1.85, 2.0])
    @pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
    def test_ecf_matches_char_fn(self, alpha, t):
        p = sv.StableParams.symmetric(alpha, 1.0)
        x = sv.sample_sas(p, 10**5, seed_for(alpha))
        assert abs(np.cos(t * x).mean() - sv.char_fn_sas(p, t)) < 0.01

    def test_cauchy_branch_quartiles(self):
        # alpha = 1, beta = 0 is Cauchy: quartiles at delta +- sigma
        x = sv.sample_stable(sv.StableParams(1.0, 0.0, 2.0, 0.5), 10**5, 11)
        q25, q50, q75 = np.quantile(x, [0.25, 0.5, 0.75])
        assert abs(q25 - (-1.5)) < 0.1
        assert abs(q50 - 0.5) < 0.05
        assert abs(q75 - 2.5) < 0.1

    def test_skewed_branch_matches_char_fn(self):
        # modulus and phase of the empirical CF against the closed form
        alpha, beta = 1.7, 0.8
        z = sv.sample_stable(sv.StableParams(alpha, beta, 1.0, 0.0), 2 * 10**5, 7)
        for t in (0.5, 1.0):
            emp = np.mean(np.exp(1j * t * z))
            theo = np.exp(-(t**alpha) * (1 - 1j * beta * np.tan(np.pi * alpha / 2)))
            assert abs(abs(emp) - abs(theo)) < 0.01
            assert abs(np.angle(emp) - np.angle(theo)) < 0.02

    def test_determinism(self):
        p = sv.StableParams.symmetric(1.7, 1.0)
        assert np.array_equal(sv.sample_sas(p, 1000, 5), sv.sample_sas(p, 1000, 5))

    def test_count_validation(self):
        with pytest.raises(ValidationError):
            sv.sample_sas(sv.StableParams.symmetric(1.5), 0, 0)


def seed_for(alpha: float) -> int:
    return int(round(alpha * 100))


class TestCharFn:
    def test_at_zero(self):
        assert sv.char_fn_sas(sv.StableParams.symmetric(1.6, 1.0), 0.0) == 1.0

    def test_gaussian_point(self):
        assert sv.char_fn_sas(sv.StableParams.symmetric(2.0, 1.0), 1.0) == pytest.approx(
            np.exp(-1.0), abs=1e-15
        )

    def test_scale_exponent_point(self):
        # (sigma |t|)^alpha = (2 * 0.5)^1.5 = 1
        assert sv.char_fn_sas(sv.StableParams.symmetric(1.5, 2.0), 0.5) == pytest.approx(
            np.exp(-1.0), abs=1e-15
        )

    def test_even_and_bounded(self):
        p = sv.StableParams.symmetric(1.7, 0.8)
        for t in (0.3, 1.1, 4.0):
            assert sv.char_fn_sas(p, t) == sv.char_fn_sas(p, -t)
            assert 0.0 < sv.char_fn_sas(p, t) <= 1.0

    def test_rejects_skewed(self):
        with pytest.raises(ValidationError):
            sv.char_fn_sas(sv.StableParams(1.5, beta=0.1), 1.0)


class TestNoiseMatrix:
    def test_shape_and_independence(self):
        spec = sv.SymmetricStableNoiseSpec.iid(2, 2.0)
        m = sv.sample_noise_matrix(spec, 3, 0)
        assert m.values.shape == (3, 2)
        big = sv.sample_noise_matrix(spec, 20000, 1).values
        corr = np.corrcoef(big[:, 0], big[:, 1])[0, 1]
        assert abs(corr) < 0.03

    def test_gaussian_column(self):
        spec = sv.SymmetricStableNoiseSpec.iid(1, 2.0)
        col = sv.sample_noise_matrix(spec, 10**5, 3).values[:, 0]
        assert abs(col.var() - 2.0) < 0.05  # variance 2 sigma^2 with sigma = 1

    def test_fixed_seed_identical(self):
        spec = sv.SymmetricStableNoiseSpec.iid(2, 1.6)
        a = sv.sample_noise_matrix(spec, 50, 9)
        b = sv.sample_noise_matrix(spec, 50, 9)
        assert np.array_equal(a.values, b.values)


class TestFitStableParams:
    @pytest.mark.parametrize("alpha", [1.5, 1.6, 1.75, 1.85, 2.0])
    def test_roundtrips_sampler(self, alpha):
        x = sv.sample_sas(sv.StableParams.symmetric(alpha, 1.0), 10**5, seed_for(alpha))
        fit = sv.fit_stable_params(x)
        assert abs(fit.alpha - alpha) < 0.1
        assert abs(fit.sigma - 1.0) < 0.1
        assert abs(fit.beta) < 0.15

    def test_gaussian_case(self):
        x = sv.sample_sas(sv.StableParams.symmetric(2.0, 1.0), 10**5, 17)
        fit = sv.fit_stable_params(x)
        assert 1.9 <= fit.alpha <= 2.0
        assert abs(fit.delta) < 0.05

    def test_recovers_shift_and_scale(self):
        x = sv.sample_stable(sv.StableParams(1.7, 0.0, 2.5, -3.0), 10**5, 23)
        fit = sv.fit_stable_params(x)
        assert abs(fit.sigma - 2.5) < 0.25
        assert abs(fit.delta - (-3.0)) < 0.15

    def test_detects_skewness(self):
        x = sv.sample_stable(sv.StableParams(1.7, 0.7, 1.0, 0.0), 10**5, 29)
        fit = sv.fit_stable_params(x)
        assert abs(fit.beta - 0.7) < 0.2

    def test_errors(self):
        with pytest.raises(ValidationError):
            sv.fit_stable_params(np.zeros(50))  # too short
        with pytest.raises(ValidationError):
            sv.fit_stable_params(np.ones(500))  # degenerate
