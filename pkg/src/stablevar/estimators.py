"""Coefficient estimation for VAR(p): FLOC moment equations, classical
least squares, classical Yule-Walker.

All three estimators mean-correct the series first and attach the
residuals x[t] - sum_k A_k x[t-k] of the corrected series to the report.
The FLOC and Yule-Walker estimators share one block solve

    [A_1 ... A_p] [Gamma_{l-k}]_{k,l} = [Gamma_1 ... Gamma_p]

differing only in the lag-moment matrices plugged in: cross-FLOC matrices
for FLOC, plain cross-moments for Yule-Walker. The window normalizer
(divide by n - |lag|) and the classical one (divide by n) are both
available; each method defaults to its literature-standard choice, and
with matched normalizers FLOC at A = B = 1 and Yule-Walker coincide.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import NumericalError, ValidationError
from .floc import FlocConfig, lag_matrix_set
from .series import SeriesMatrix
from .var_core import mean_correct

__all__ = [
    "EstimationReport",
    "estimate_floc",
    "estimate_ls",
    "estimate_yw",
    "residuals",
    "CONDITION_LIMIT",
]

CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class EstimationReport:
    """Estimated coefficient matrices plus solve diagnostics."""

    method: str
    coeffs: tuple
    condition: float
    residuals: SeriesMatrix
    column_means: np.ndarray
    cfg: Optional[FlocConfig] = None
    normalizer: Optional[str] = None

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def dim(self) -> int:
        return self.coeffs[0].shape[0]

    def coeff_array(self) -> np.ndarray:
        return np.stack(self.coeffs)

    def to_csv(self, path) -> None:
        """Write `method,k,i,j,value` rows (1-based indices)."""
        with open(path, "w", newline="") as fh:
            fh.write("method,k,i,j,value\n")
            for k, mat in enumerate(self.coeffs, start=1):
                for i in range(self.dim):
                    for j in range(self.dim):
                        fh.write(f"{self.method},{k},{i + 1},{j + 1},{mat[i, j]:.17g}\n")

    @staticmethod
    def read_coeffs_csv(path) -> Tuple[str, list]:
        """Read back (method, [A_1 ... A_p]) from a report CSV."""
        entries = {}
        method = None
        with open(path, "r") as fh:
            header = fh.readline().strip()
            if header != "method,k,i,j,value":
                raise ValidationError(f"{path}: expected report header, got {header!r}")
            for lineno, line in enumerate(fh, start=2):
                line = line.strip()
                if not line:
                    continue
                parts = line.split(",")
                if len(parts) != 5:
                    raise ValidationError(f"{path}:{lineno}: malformed row")
                method = parts[0]
                try:
                    k, i, j = int(parts[1]), int(parts[2]), int(parts[3])
                    entries[(k, i, j)] = float(parts[4])
                except ValueError as exc:
                    raise ValidationError(f"{path}:{lineno}: {exc}") from exc
        if not entries:
            raise ValidationError(f"{path}: no coefficient rows")
        p = max(k for k, _, _ in entries)
        r = max(i for _, i, _ in entries)
        coeffs = []
        for k in range(1, p + 1):
            mat = np.empty((r, r))
            for i in range(1, r + 1):
                for j in range(1, r + 1):
                    if (k, i, j) not in entries:
                        raise ValidationError(f"{path}: missing entry k={k}, i={i}, j={j}")
                    mat[i - 1, j - 1] = entries[(k, i, j)]
            coeffs.append(mat)
        return method, coeffs

    def summary_text(self) -> str:
        lines = [
            f"method: {self.method}",
            f"order: {self.order}",
            f"dim: {self.dim}",
            f"condition: {self.condition:.6g}",
            "column_means: " + ",".join(f"{m:.17g}" for m in self.column_means),
        ]
        if self.cfg is not None:
            lines.append(f"exp_a: {self.cfg.exp_a:.17g}")
            lines.append(f"exp_b: {self.cfg.exp_b:.17g}")
        if self.normalizer is not None:
            lines.append(f"normalizer: {self.normalizer}")
        return "\n".join(lines) + "\n"


def residuals(series: SeriesMatrix, coeffs: Sequence[np.ndarray]) -> SeriesMatrix:
    """z[t] = x[t] - sum_k A_k x[t-k] for t > p; length n - p."""
    p = len(coeffs)
    r = series.dim
    for k, mat in enumerate(coeffs, start=1):
        mat = np.asarray(mat)
        if mat.shape != (r, r):
            raise ValidationError(f"A_{k} has shape {mat.shape}, expected ({r}, {r})")
    if series.n <= p:
        raise ValidationError(f"series of length {series.n} too short for order {p}")
    x = series.values
    res = x[p:].copy()
    for k, mat in enumerate(coeffs, start=1):
        res -= x[p - k : series.n - k] @ np.asarray(mat).T
    return SeriesMatrix(res)


def _check_columns_not_constant(series: SeriesMatrix) -> None:
    spans = np.ptp(series.values, axis=0)
    flat = np.nonzero(spans == 0.0)[0]
    if flat.size:
        raise ValidationError(
            f"constant column(s) {', '.join(str(j + 1) for j in flat)}: "
            "lag-0 moment matrix would be singular"
        )


def _validate_normalizer(normalizer: str) -> None:
    if normalizer not in ("window", "n"):
        raise ValidationError(f"normalizer must be 'window' or 'n', got {normalizer!r}")


def _lag_moments(
    series: SeriesMatrix, p: int, cfg: FlocConfig, normalizer: str
) -> dict:
    """Lag moment matrices for lags -(p-1)..p under the chosen normalizer."""
    lags = lag_matrix_set(series, p, cfg)
    n = series.n
    if normalizer == "window":
        return dict(lags.matrices)
    return {lag: mat * ((n - abs(lag)) / n) for lag, mat in lags.matrices.items()}


def _solve_block(gammas: dict, p: int, r: int, label: str):
    """Solve [A_1..A_p] Block = [Gamma_1..Gamma_p] with Block_{k,l} = Gamma_{l-k}."""
    block = np.empty((p * r, p * r))
    for k in range(1, p + 1):
        for l in range(1, p + 1):
            block[(k - 1) * r : k * r, (l - 1) * r : l * r] = gammas[l - k]
    rhs = np.hstack([gammas[l] for l in range(1, p + 1)])
    condition = float(np.linalg.cond(block))
    if not np.isfinite(condition) or condition > CONDITION_LIMIT:
        raise NumericalError(
            f"{label} block matrix ({p * r}x{p * r} of lag matrices "
            f"Gamma_-{p - 1}..Gamma_{p - 1}) is numerically singular: "
            f"condition {condition:.3g}"
        )
    stacked = np.linalg.solve(block.T, rhs.T).T
    coeffs = tuple(np.ascontiguousarray(stacked[:, (k - 1) * r : k * r]) for k in range(1, p + 1))
    return coeffs, condition


def _prepare(series: SeriesMatrix, p: int, min_n: int):
    if p < 1:
        raise ValidationError(f"order must be >= 1, got {p}")
    if series.n <= min_n:
        raise ValidationError(
            f"series of length {series.n} too short: need more than {min_n} rows"
        )
    _check_columns_not_constant(series)
    means = series.values.mean(axis=0)
    return mean_correct(series), means


def estimate_floc(
    series: SeriesMatrix,
    p: int,
    cfg: FlocConfig,
    normalizer: str = "window",
) -> EstimationReport:
    """FLOC coefficient estimates from the lag cross-FLOC block system.

    The first exponent is pinned to A = 1; choose B below alpha - 1 (the
    usual working default is B = alpha_hat - 1.05).
    """
    _validate_normalizer(normalizer)
    if cfg.exp_a != 1.0:
        raise ValidationError(f"FLOC estimation fixes A = 1, got A = {cfg.exp_a}")
    corrected, means = _prepare(series, p, 2 * p * series.dim)
    gammas = _lag_moments(corrected, p, cfg, normalizer)
    coeffs, condition = _solve_block(gammas, p, series.dim, "cross-FLOC")
    return EstimationReport(
        method="floc",
        coeffs=coeffs,
        condition=condition,
        residuals=residuals(corrected, coeffs),
        column_means=means,
        cfg=cfg,
        normalizer=normalizer,
    )


def estimate_yw(series: SeriesMatrix, p: int, normalizer: str = "n") -> EstimationReport:
    """Classical Yule-Walker: the block system with sample cross-moments."""
    _validate_normalizer(normalizer)
    corrected, means = _prepare(series, p, 2 * p * series.dim)
    gammas = _lag_moments(corrected, p, FlocConfig(exp_a=1.0, exp_b=1.0), normalizer)
    coeffs, condition = _solve_block(gammas, p, series.dim, "autocovariance")
    return EstimationReport(
        method="yw",
        coeffs=coeffs,
        condition=condition,
        residuals=residuals(corrected, coeffs),
        column_means=means,
        normalizer=normalizer,
    )


def estimate_ls(series: SeriesMatrix, p: int) -> EstimationReport:
    """Least squares: regress x[t] on (x[t-1], ..., x[t-p])."""
    r = series.dim
    corrected, means = _prepare(series, p, p * r + p)
    x = corrected.values
    n = corrected.n
    design = np.hstack([x[p - k : n - k] for k in range(1, p + 1)])
    target = x[p:]
    theta, _, rank, _ = np.linalg.lstsq(design, target, rcond=None)
    if rank < p * r:
        raise NumericalError(
            f"rank-deficient regressor matrix: rank {rank} < {p * r}"
        )
    condition = float(np.linalg.cond(design))
    coeffs = tuple(
        np.ascontiguousarray(theta[(k - 1) * r : k * r].T) for k in range(1, p + 1)
    )
    return EstimationReport(
        method="ls",
        coeffs=coeffs,
        condition=condition,
        residuals=residuals(corrected, coeffs),
        column_means=means,
    )
