"""VAR(p) models: causality, moving-average weights, simulation.

The process is x[t] = A_1 x[t-1] + ... + A_p x[t-p] + z[t] with z[t] an
independent-component symmetric stable vector. Causality is checked on the
companion matrix; simulation starts from zero states and discards a burn-in
prefix so the retained path is effectively stationary.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import _kernels
from .errors import ValidationError
from .seeding import Seed
from .series import SeriesMatrix
from .stable_noise import SymmetricStableNoiseSpec, sample_noise_matrix

__all__ = [
    "VarModel",
    "SeriesMatrix",
    "CausalityResult",
    "companion_matrix",
    "is_causal",
    "psi_matrices",
    "psi_count_for_tolerance",
    "simulate",
    "mean_correct",
]

DEFAULT_BURN_IN = 500
DEFAULT_CAUSALITY_MARGIN = 1e-8


@dataclass(frozen=True)
class VarModel:
    """Order-p vector autoregression with stable noise.

    ``coeffs`` holds the p coefficient matrices A_1 ... A_p, each r x r.
    """

    coeffs: tuple
    noise: SymmetricStableNoiseSpec

    def __post_init__(self) -> None:
        mats = tuple(np.array(a, dtype=float) for a in self.coeffs)
        if len(mats) < 1:
            raise ValidationError("model needs at least one coefficient matrix")
        r = mats[0].shape[0] if mats[0].ndim == 2 else -1
        for k, a in enumerate(mats, start=1):
            if a.ndim != 2 or a.shape != (r, r):
                raise ValidationError(
                    f"A_{k} must be {r}x{r}, got shape {a.shape}"
                )
            if not np.all(np.isfinite(a)):
                raise ValidationError(f"A_{k} contains non-finite entries")
            a.flags.writeable = False
        if self.noise.dim != r:
            raise ValidationError(
                f"noise dimension {self.noise.dim} != model dimension {r}"
            )
        object.__setattr__(self, "coeffs", mats)

    @property
    def dim(self) -> int:
        return self.coeffs[0].shape[0]

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def coeff_array(self) -> np.ndarray:
        """Coefficients stacked as a (p, r, r) array."""
        return np.stack(self.coeffs)


class CausalityResult(NamedTuple):
    causal: bool
    spectral_radius: float


def companion_matrix(coeffs: Sequence[np.ndarray]) -> np.ndarray:
    """pr x pr companion form [[A_1 ... A_p], [I 0 ...], ...]."""
    p = len(coeffs)
    r = coeffs[0].shape[0]
    comp = np.zeros((p * r, p * r))
    comp[:r] = np.hstack(coeffs)
    if p > 1:
        comp[r:, : (p - 1) * r] = np.eye((p - 1) * r)
    return comp


def is_causal(model: VarModel, margin: float = DEFAULT_CAUSALITY_MARGIN) -> CausalityResult:
    """Whether the companion spectral radius is below 1 - margin.

    Radius < 1 is equivalent to det(I - A_1 z - ... - A_p z^p) != 0 on the
    closed unit disk, the usual causality condition.
    """
    radius = float(np.max(np.abs(np.linalg.eigvals(companion_matrix(model.coeffs)))))
    return CausalityResult(radius < 1.0 - margin, radius)


def _require_causal(model: VarModel) -> None:
    check = is_causal(model)
    if not check.causal:
        raise ValidationError(
            f"model is not causal: companion spectral radius {check.spectral_radius:.6f} >= 1"
        )


def psi_matrices(model: VarModel, count: int) -> list:
    """Moving-average weights Psi_0 ... Psi_count of the causal representation.

    Psi_0 = I and Psi_j = sum_{k=1}^{min(j,p)} A_k Psi_{j-k}; entries decay
    geometrically for causal models.
    """
    if count < 0:
        raise ValidationError(f"count must be >= 0, got {count}")
    _require_causal(model)
    r, p = model.dim, model.order
    psi = [np.eye(r)]
    for j in range(1, count + 1):
        acc = np.zeros((r, r))
        for k in range(1, min(j, p) + 1):
            acc += model.coeffs[k - 1] @ psi[j - k]
        psi.append(acc)
    return psi


def psi_count_for_tolerance(model: VarModel, tol: float = 1e-12, max_count: int = 100_000) -> int:
    """Smallest j with max-abs entry of Psi_j below ``tol``."""
    _require_causal(model)
    r, p = model.dim, model.order
    psi = [np.eye(r)]
    for j in range(1, max_count + 1):
        acc = np.zeros((r, r))
        for k in range(1, min(j, p) + 1):
            acc += model.coeffs[k - 1] @ psi[j - k]
        if np.max(np.abs(acc)) < tol:
            return j
        psi.append(acc)
    raise ValidationError(f"Psi entries did not fall below {tol} within {max_count} terms")


def simulate(
    model: VarModel,
    n: int,
    burn_in: int = DEFAULT_BURN_IN,
    rng_seed: Seed = 0,
) -> SeriesMatrix:
    """Simulate n observations of the model after discarding ``burn_in`` rows.

    Initial states are zero vectors; with burn_in = 0 and all-zero
    coefficients the output reproduces sample_noise_matrix draws exactly.
    """
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if burn_in < 0:
        raise ValidationError(f"burn_in must be >= 0, got {burn_in}")
    _require_causal(model)
    noise = sample_noise_matrix(model.noise, n + burn_in, rng_seed)
    path = _kernels.var_recursion(model.coeff_array(), noise.values)
    return SeriesMatrix(path[burn_in:])


def mean_correct(series: SeriesMatrix) -> SeriesMatrix:
    """Subtract per-column sample means."""
    if series.n < 2:
        raise ValidationError("mean correction needs at least 2 observations")
    return SeriesMatrix(series.values - series.values.mean(axis=0))
