"""Residual diagnostics for fitted models.

Three checks that the residual columns behave like independent stable
noise: the auto-FLOC function (dependence surrogate, with a Monte Carlo
null band so "flat" is a mechanical judgement), QQ data against the
fitted stable law, and a Kolmogorov-Smirnov test whose null distribution
is simulated by a parametric bootstrap that re-fits the parameters in
every repetition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Tuple

import numpy as np

from .errors import ValidationError
from .floc import FlocConfig, cross_floc
from .seeding import substream
from .stable_dist import stable_cdf_bulk, stable_quantile
from .stable_noise import StableParams, fit_stable_params, sample_stable

__all__ = [
    "AutoFlocSeries",
    "KsTestResult",
    "QqData",
    "auto_floc",
    "auto_floc_null_band",
    "ks_statistic",
    "ks_test_stable",
    "qq_data",
    "write_auto_floc_csv",
    "write_qq_csv",
    "ks_summary_line",
]


@dataclass(frozen=True)
class AutoFlocSeries:
    """Auto-FLOC values of one column at lags 0..L."""

    lags: np.ndarray
    values: np.ndarray
    cfg: FlocConfig

    def __post_init__(self) -> None:
        if self.lags.shape != self.values.shape:
            raise ValidationError("lags and values must have matching lengths")
        if self.lags[0] != 0:
            raise ValidationError("lag 0 must be present")


@dataclass(frozen=True)
class KsTestResult:
    statistic: float
    p_value: float
    repetitions: int
    fitted: StableParams


class QqData(NamedTuple):
    levels: np.ndarray
    empirical: np.ndarray
    fitted: np.ndarray


def auto_floc(residual_column, max_lag: int, cfg: FlocConfig) -> AutoFlocSeries:
    """Auto-FLOC value cross_floc(column, column, k) for k = 0..max_lag."""
    col = np.asarray(residual_column, dtype=float).ravel()
    if max_lag < 0 or max_lag >= col.shape[0]:
        raise ValidationError(
            f"max_lag must be in [0, {col.shape[0] - 1}], got {max_lag}"
        )
    if not np.any(col != 0.0):
        raise ValidationError("degenerate all-zero column")
    lags = np.arange(max_lag + 1)
    values = np.array([cross_floc(col, col, int(k), cfg) for k in lags])
    return AutoFlocSeries(lags=lags, values=values, cfg=cfg)


def auto_floc_null_band(
    fitted: StableParams,
    n: int,
    max_lag: int,
    cfg: FlocConfig,
    replicates: int = 200,
    level: float = 0.95,
    rng_seed: int = 0,
) -> Tuple[np.ndarray, np.ndarray]:
    """Pointwise null band of the auto-FLOC under i.i.d. noise.

    Simulates ``replicates`` independent samples of length ``n`` from the
    fitted law and takes per-lag percentiles, so an observed auto-FLOC can
    be judged against what pure noise produces.
    """
    if replicates < 2:
        raise ValidationError(f"need at least 2 replicates, got {replicates}")
    if not (0.0 < level < 1.0):
        raise ValidationError(f"level must be in (0, 1), got {level}")
    sims = np.empty((replicates, max_lag + 1))
    for rep in range(replicates):
        sample = sample_stable(fitted, n, substream(rng_seed, rep))
        sims[rep] = [cross_floc(sample, sample, k, cfg) for k in range(max_lag + 1)]
    tail = 100.0 * (1.0 - level) / 2.0
    lo = np.percentile(sims, tail, axis=0)
    hi = np.percentile(sims, 100.0 - tail, axis=0)
    return lo, hi


def ks_statistic(column, fitted: StableParams) -> float:
    """sup-distance between the empirical CDF and the fitted stable CDF."""
    x = np.sort(np.asarray(column, dtype=float).ravel())
    n = x.shape[0]
    cdf = stable_cdf_bulk(x, fitted)
    steps = np.arange(1, n + 1) / n
    return float(max(np.max(steps - cdf), np.max(cdf - (steps - 1.0 / n))))


def ks_test_stable(residual_column, repetitions: int = 100, rng_seed: int = 0) -> KsTestResult:
    """Goodness-of-fit of a stable law with bootstrap-calibrated p-value.

    Fits the stable parameters, computes the KS statistic against the
    fitted CDF, then simulates ``repetitions`` same-length samples from the
    fitted law, re-fitting and recomputing the statistic each time. The
    p-value is the fraction of simulated statistics at least as large as
    the observed one.
    """
    col = np.asarray(residual_column, dtype=float).ravel()
    if col.shape[0] < 100:
        raise ValidationError(f"need at least 100 observations, got {col.shape[0]}")
    if repetitions < 100:
        raise ValidationError(f"need at least 100 repetitions, got {repetitions}")
    fitted = fit_stable_params(col)
    d_obs = ks_statistic(col, fitted)
    exceed = 0
    for rep in range(repetitions):
        sim = sample_stable(fitted, col.shape[0], substream(rng_seed, rep))
        d_rep = ks_statistic(sim, fit_stable_params(sim))
        if d_rep >= d_obs:
            exceed += 1
    return KsTestResult(
        statistic=d_obs,
        p_value=exceed / repetitions,
        repetitions=repetitions,
        fitted=fitted,
    )


def qq_data(residual_column, fitted: StableParams, grid: int = 99) -> QqData:
    """(empirical quantile, fitted quantile) pairs at mid-grid levels."""
    if grid < 2:
        raise ValidationError(f"grid must be >= 2, got {grid}")
    col = np.asarray(residual_column, dtype=float).ravel()
    levels = (np.arange(grid) + 0.5) / grid
    empirical = np.quantile(col, levels)
    fitted_q = stable_quantile(levels, fitted)
    return QqData(levels=levels, empirical=empirical, fitted=fitted_q)


def write_auto_floc_csv(path, series: AutoFlocSeries, band: Tuple[np.ndarray, np.ndarray]) -> None:
    lo, hi = band
    with open(path, "w", newline="") as fh:
        fh.write("lag,value,band_lo,band_hi\n")
        for k, v, a, b in zip(series.lags, series.values, lo, hi):
            fh.write(f"{k},{v:.17g},{a:.17g},{b:.17g}\n")


def write_qq_csv(path, qq: QqData) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("level,empirical,fitted\n")
        for lvl, emp, fit in zip(qq.levels, qq.empirical, qq.fitted):
            fh.write(f"{lvl:.17g},{emp:.17g},{fit:.17g}\n")


def ks_summary_line(result: KsTestResult) -> str:
    f = result.fitted
    return (
        f"ks statistic={result.statistic:.6g} p_value={result.p_value:.6g} "
        f"repetitions={result.repetitions} fitted alpha={f.alpha:.6g} "
        f"beta={f.beta:.6g} sigma={f.sigma:.6g} delta={f.delta:.6g}"
    )
