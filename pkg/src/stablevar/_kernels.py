"""Hot numeric kernels: numba-jitted with a pure-numpy fallback.

The active implementation is chosen at import time. Set the environment
variable ``STABLEVAR_NUMBA=0`` (or ``false``/``off``) to force the numpy
path; it is also used automatically when numba is not importable. The
benchmark in ``benchmarks/bench_kernels.py`` times both paths via the
``py_*`` / ``nb_*`` names exported here.
"""

from __future__ import annotations

import math
import os

import numpy as np

__all__ = [
    "NUMBA_ENABLED",
    "stable_transform",
    "var_recursion",
    "cross_floc_sum",
    "gil_pelaez_cdf",
]


def _numba_requested() -> bool:
    flag = os.environ.get("STABLEVAR_NUMBA", "1").strip().lower()
    return flag not in ("0", "false", "off", "no")


# ---------------------------------------------------------------------------
# pure-numpy reference implementations
# ---------------------------------------------------------------------------

def py_stable_transform(phi: np.ndarray, w: np.ndarray, alpha: float, beta: float) -> np.ndarray:
    """Chambers-Mallows-Stuck transform of a uniform angle and an exponential.

    ``phi`` is uniform on (-pi/2, pi/2), ``w`` standard exponential. Returns
    draws from the standard stable law with unit scale and zero shift in the
    parametrization whose characteristic function is
    exp{-|t|^a [1 - i b sign(t) tan(pi a/2)]} for alpha != 1. The alpha = 2
    short-circuit lives in the caller.
    """
    if alpha == 1.0:
        bphi = 0.5 * np.pi + beta * phi
        x = (2.0 / np.pi) * (
            bphi * np.tan(phi) - beta * np.log((0.5 * np.pi * w * np.cos(phi)) / bphi)
        )
        return x
    if beta == 0.0:
        return (np.sin(alpha * phi) / np.cos(phi) ** (1.0 / alpha)) * (
            np.cos((1.0 - alpha) * phi) / w
        ) ** ((1.0 - alpha) / alpha)
    zeta = beta * math.tan(0.5 * math.pi * alpha)
    b_ab = math.atan(zeta) / alpha
    s_ab = (1.0 + zeta * zeta) ** (1.0 / (2.0 * alpha))
    return (
        s_ab
        * (np.sin(alpha * (phi + b_ab)) / np.cos(phi) ** (1.0 / alpha))
        * (np.cos(phi - alpha * (phi + b_ab)) / w) ** ((1.0 - alpha) / alpha)
    )


def py_var_recursion(coeffs: np.ndarray, noise: np.ndarray) -> np.ndarray:
    """Drive x[t] = sum_k coeffs[k-1] @ x[t-k] + noise[t] from zero states.

    ``coeffs`` has shape (p, r, r), ``noise`` shape (m, r); returns (m, r).
    """
    p = coeffs.shape[0]
    m = noise.shape[0]
    out = noise.copy()
    for t in range(m):
        kmax = min(p, t)
        for k in range(1, kmax + 1):
            out[t] += coeffs[k - 1] @ out[t - k]
    return out


def py_cross_floc_sum(xi: np.ndarray, xj: np.ndarray, k: int, a: float, b: float) -> float:
    """Window sum of |xi[n]|^a |xj[n-k]|^b sign(xi[n] xj[n-k]), unnormalized.

    Valid window: n in [max(0, k), min(n, n+k)) so neither series is indexed
    out of range; the caller divides by the window length n - |k|.
    np.sum keeps the accumulation pairwise.
    """
    n = xi.shape[0]
    lo = max(0, k)
    hi = min(n, n + k)
    u = xi[lo:hi]
    v = xj[lo - k : hi - k]
    terms = np.abs(u) ** a * np.abs(v) ** b * np.sign(u) * np.sign(v)
    return float(np.sum(terms))


def py_gil_pelaez_cdf(
    z: np.ndarray,
    t: np.ndarray,
    amp: np.ndarray,
    ph: np.ndarray,
    w0: float,
) -> np.ndarray:
    """CDF of a standard stable law at points ``z`` by a fixed quadrature grid.

    ``t`` holds the strictly positive quadrature nodes, ``amp`` the combined
    exp(-t^alpha) * weight / t factors, ``ph`` the skewness phase at each
    node, and ``w0`` the weight of the t=0 node whose integrand limit is -z
    (valid for alpha > 1). Chunked to bound the temporary (len(z) x len(t))
    matrix.
    """
    out = np.empty(z.shape[0])
    chunk = max(1, int(4_000_000 // max(1, t.shape[0])))
    for s in range(0, z.shape[0], chunk):
        zz = z[s : s + chunk, None]
        acc = np.sin(ph[None, :] - t[None, :] * zz) @ amp
        acc += w0 * (-z[s : s + chunk])
        out[s : s + chunk] = 0.5 - acc / np.pi
    return out


# ---------------------------------------------------------------------------
# numba-jitted implementations
# ---------------------------------------------------------------------------

NUMBA_ENABLED = False
nb_stable_transform = None
nb_var_recursion = None
nb_cross_floc_sum = None
nb_gil_pelaez_cdf = None

if _numba_requested():
    try:
        from numba import njit

        @njit(cache=True)
        def nb_stable_transform(phi, w, alpha, beta):  # pragma: no cover - mirrored by py_
            n = phi.shape[0]
            out = np.empty(n)
            if alpha == 1.0:
                for i in range(n):
                    bphi = 0.5 * np.pi + beta * phi[i]
                    out[i] = (2.0 / np.pi) * (
                        bphi * np.tan(phi[i])
                        - beta * np.log((0.5 * np.pi * w[i] * np.cos(phi[i])) / bphi)
                    )
                return out
            inv_alpha = 1.0 / alpha
            expo = (1.0 - alpha) / alpha
            if beta == 0.0:
                for i in range(n):
                    out[i] = (
                        np.sin(alpha * phi[i]) / np.cos(phi[i]) ** inv_alpha
                    ) * (np.cos((1.0 - alpha) * phi[i]) / w[i]) ** expo
                return out
            zeta = beta * np.tan(0.5 * np.pi * alpha)
            b_ab = np.arctan(zeta) / alpha
            s_ab = (1.0 + zeta * zeta) ** (1.0 / (2.0 * alpha))
            for i in range(n):
                shifted = phi[i] + b_ab
                out[i] = (
                    s_ab
                    * (np.sin(alpha * shifted) / np.cos(phi[i]) ** inv_alpha)
                    * (np.cos(phi[i] - alpha * shifted) / w[i]) ** expo
                )
            return out

        @njit(cache=True)
        def nb_var_recursion(coeffs, noise):  # pragma: no cover
            p = coeffs.shape[0]
            m = noise.shape[0]
            r = noise.shape[1]
            out = noise.copy()
            for t in range(m):
                kmax = min(p, t)
                for k in range(1, kmax + 1):
                    for i in range(r):
                        acc = 0.0
                        for j in range(r):
                            acc += coeffs[k - 1, i, j] * out[t - k, j]
                        out[t, i] += acc
            return out

        @njit(cache=True)
        def nb_cross_floc_sum(xi, xj, k, a, b):  # pragma: no cover
            n = xi.shape[0]
            lo = max(0, k)
            hi = min(n, n + k)
            s = 0.0
            c = 0.0  # Kahan compensation; heavy-tailed terms cancel badly
            for m in range(lo, hi):
                u = xi[m]
                v = xj[m - k]
                sgn = 0.0
                if u > 0.0:
                    sgn = 1.0
                elif u < 0.0:
                    sgn = -1.0
                if v < 0.0:
                    sgn = -sgn
                elif v == 0.0:
                    sgn = 0.0
                term = abs(u) ** a * abs(v) ** b * sgn
                y = term - c
                tt = s + y
                c = (tt - s) - y
                s = tt
            return s

        @njit(cache=True, fastmath=True)
        def nb_gil_pelaez_cdf(z, t, amp, ph, w0):  # pragma: no cover
            nz = z.shape[0]
            nt = t.shape[0]
            out = np.empty(nz)
            for i in range(nz):
                zi = z[i]
                acc = w0 * (-zi)
                for j in range(nt):
                    acc += amp[j] * np.sin(ph[j] - t[j] * zi)
                out[i] = 0.5 - acc / np.pi
            return out

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - exercised via env flag instead
        NUMBA_ENABLED = False


if NUMBA_ENABLED:
    stable_transform = nb_stable_transform
    var_recursion = nb_var_recursion
    cross_floc_sum = nb_cross_floc_sum
    gil_pelaez_cdf = nb_gil_pelaez_cdf
else:
    stable_transform = py_stable_transform
    var_recursion = py_var_recursion
    cross_floc_sum = py_cross_floc_sum
    gil_pelaez_cdf = py_gil_pelaez_cdf
