"""Shared test fixtures: reference models and independent brute-force oracles."""

import numpy as np

import stablevar as sv

A1 = np.array([[0.1, 0.3], [0.2, 0.1]])
A2 = np.array([[0.2, 0.2], [0.05, 0.1]])
A2_COMPARISON = np.array([[0.3, 0.2], [0.4, 0.1]])


def var2_model(alpha: float, sigma: float = 1.0) -> sv.VarModel:
    """The 2-dim VAR(2) simulation model used throughout."""
    return sv.VarModel(
        coeffs=(A1, A2), noise=sv.SymmetricStableNoiseSpec.iid(2, alpha, sigma)
    )


def comparison_model(alpha: float) -> sv.VarModel:
    return sv.VarModel(
        coeffs=(A1, A2_COMPARISON), noise=sv.SymmetricStableNoiseSpec.iid(2, alpha)
    )


def sign0(v: float) -> float:
    return (v > 0) - (v < 0)


def brute_cross_floc(xi, xj, k, a, b):
    """Independent double-loop oracle. Returns (value, term count, terms)."""
    n = len(xi)
    lo, hi = max(0, k), min(n, n + k)
    terms = []
    for m in range(lo, hi):
        u, v = xi[m], xj[m - k]
        terms.append(abs(u) ** a * abs(v) ** b * sign0(u) * sign0(v))
    return sum(terms) / len(terms), len(terms), terms


def brute_lag_moment_matrix(values: np.ndarray, lag: int):
    """Naive lagged cross-moment matrix (A = B = 1 case), window-normalized."""
    n, r = values.shape
    out = np.zeros((r, r))
    lo, hi = max(0, lag), min(n, n + lag)
    for i in range(r):
        for j in range(r):
            s = 0.0
            for m in range(lo, hi):
                s += values[m, i] * values[m - lag, j]
            out[i, j] = s / (hi - lo)
    return out
