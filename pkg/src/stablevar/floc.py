"""Fractional lower-order covariance: the dependence measure replacing
covariance when second moments do not exist.

The cross-FLOC of two trajectories at lag k averages
|x_i[n]|^A |x_j[n-k]|^B sign(x_i[n] x_j[n-k]) over the n for which both
indices are in range; the normalizer is the window length N - |k|. With
A = B = 1 this is the plain lagged cross-moment.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from . import _kernels
from .errors import ValidationError
from .series import SeriesMatrix

__all__ = [
    "FlocConfig",
    "LagMatrixSet",
    "signed_power",
    "cross_floc",
    "lag_matrix",
    "lag_matrix_set",
    "floc_vs_covariation_check",
]


@dataclass(frozen=True)
class FlocConfig:
    """Exponent pair (A, B); ``alpha_hint`` enables the A + B < alpha check."""

    exp_a: float = 1.0
    exp_b: float = 0.0
    alpha_hint: Optional[float] = None

    def __post_init__(self) -> None:
        if self.exp_a < 0.0 or self.exp_b < 0.0:
            raise ValidationError(
                f"exponents must be >= 0, got A={self.exp_a}, B={self.exp_b}"
            )
        if self.alpha_hint is not None and self.exp_a + self.exp_b >= self.alpha_hint:
            raise ValidationError(
                f"A + B = {self.exp_a + self.exp_b} must be < alpha = {self.alpha_hint}"
            )

    def warn_if_invalid_for(self, alpha: float) -> None:
        """Warn (not fail) when A + B >= an after-the-fact alpha estimate."""
        if self.exp_a + self.exp_b >= alpha:
            warnings.warn(
                f"A + B = {self.exp_a + self.exp_b:.3f} >= estimated alpha "
                f"{alpha:.3f}; the fractional moment may not exist",
                stacklevel=2,
            )


def signed_power(x, a: float):
    """|x|^a sign(x), with 0^<0> = 0 so exact zeros never contribute."""
    if a < 0.0:
        raise ValidationError(f"exponent must be >= 0, got {a}")
    x = np.asarray(x, dtype=float)
    out = np.abs(x) ** a * np.sign(x)
    return float(out) if out.ndim == 0 else out


def _as_column(x, name: str) -> np.ndarray:
    arr = np.ascontiguousarray(x, dtype=float).ravel()
    if arr.shape[0] < 1:
        raise ValidationError(f"{name} is empty")
    return arr


def cross_floc(xi, xj, k: int, cfg: FlocConfig) -> float:
    """Sample cross-FLOC of ``xi`` against ``xj`` lagged by ``k``.

    Averages signed_power(xi[n], A) * signed_power(xj[n-k], B) over the
    valid window, which has exactly N - |k| terms.
    """
    xi = _as_column(xi, "xi")
    xj = _as_column(xj, "xj")
    if xi.shape[0] != xj.shape[0]:
        raise ValidationError(
            f"trajectories must share a length, got {xi.shape[0]} and {xj.shape[0]}"
        )
    n = xi.shape[0]
    k = int(k)
    if abs(k) >= n:
        raise ValidationError(f"lag {k} out of range for length {n}: empty window")
    total = _kernels.cross_floc_sum(xi, xj, k, cfg.exp_a, cfg.exp_b)
    return float(total) / (n - abs(k))


def lag_matrix(series: SeriesMatrix, lag: int, cfg: FlocConfig) -> np.ndarray:
    """r x r matrix with entry (i, j) = cross_floc(column i, column j, lag)."""
    if abs(int(lag)) >= series.n:
        raise ValidationError(f"lag {lag} out of range for series of length {series.n}")
    r = series.dim
    out = np.empty((r, r))
    for i in range(r):
        for j in range(r):
            out[i, j] = cross_floc(series.values[:, i], series.values[:, j], lag, cfg)
    return out


@dataclass(frozen=True)
class LagMatrixSet:
    """Cross-FLOC matrices on a contiguous lag range."""

    dim: int
    matrices: Dict[int, np.ndarray]

    def __post_init__(self) -> None:
        lags = sorted(self.matrices)
        if not lags:
            raise ValidationError("lag matrix set is empty")
        if lags != list(range(lags[0], lags[-1] + 1)):
            raise ValidationError(f"lags must be contiguous, got {lags}")
        for lag, mat in self.matrices.items():
            if mat.shape != (self.dim, self.dim) or not np.all(np.isfinite(mat)):
                raise ValidationError(f"matrix at lag {lag} is invalid")

    @property
    def lag_range(self) -> Tuple[int, int]:
        lags = sorted(self.matrices)
        return lags[0], lags[-1]

    def __getitem__(self, lag: int) -> np.ndarray:
        return self.matrices[lag]

    def to_csv(self, path) -> None:
        """Write `lag,i,j,value` rows (1-based i, j) for plotting/debugging."""
        with open(path, "w", newline="") as fh:
            fh.write("lag,i,j,value\n")
            for lag in sorted(self.matrices):
                mat = self.matrices[lag]
                for i in range(self.dim):
                    for j in range(self.dim):
                        fh.write(f"{lag},{i + 1},{j + 1},{mat[i, j]:.17g}\n")


def lag_matrix_set(series: SeriesMatrix, p: int, cfg: FlocConfig) -> LagMatrixSet:
    """All lag matrices needed by the order-p block system: lags -(p-1)..p."""
    if p < 1:
        raise ValidationError(f"order must be >= 1, got {p}")
    if series.n <= 2 * p:
        raise ValidationError(f"series of length {series.n} too short for order {p}")
    matrices = {lag: lag_matrix(series, lag, cfg) for lag in range(-(p - 1), p + 1)}
    return LagMatrixSet(dim=series.dim, matrices=matrices)


def floc_vs_covariation_check(
    xi, xj, cfg: FlocConfig, sigma_y: float, alpha: float
) -> Tuple[float, float]:
    """Evaluate both sides of the FLOC/covariation identity with empirical moments.

    With A = 1 and B = q - 1, the cross-FLOC equals
    CV(X, Y) * E|Y|^q / (q * sigma_Y^alpha) where
    CV(X, Y) = q * E[X Y^<q-1>] / E|Y|^q * sigma_Y^alpha. Returns
    (floc value, covariation-implied value); the pair agrees to machine
    precision, which makes this a useful wiring check.
    """
    if not (1.0 < alpha < 2.0):
        raise ValidationError(f"identity requires 1 < alpha < 2, got {alpha}")
    q = cfg.exp_b + 1.0
    if not (1.0 <= q < alpha):
        raise ValidationError(f"q = B + 1 = {q} must lie in [1, alpha) = [1, {alpha})")
    if cfg.exp_a != 1.0:
        raise ValidationError(f"identity holds for A = 1, got A = {cfg.exp_a}")
    if sigma_y <= 0.0:
        raise ValidationError(f"sigma_y must be positive, got {sigma_y}")
    xi = _as_column(xi, "xi")
    xj = _as_column(xj, "xj")
    if xi.shape[0] != xj.shape[0]:
        raise ValidationError("trajectories must share a length")
    floc_value = float(np.mean(xi * signed_power(xj, q - 1.0)))
    abs_moment = float(np.mean(np.abs(xj) ** q))
    covariation = q * floc_value / abs_moment * sigma_y**alpha
    implied = covariation * abs_moment / (q * sigma_y**alpha)
    return floc_value, implied
