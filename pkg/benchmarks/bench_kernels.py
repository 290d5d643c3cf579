#!/usr/bin/env python3
"""Time the numba kernels against their pure-numpy fallbacks.

Run:  python benchmarks/bench_kernels.py
The numpy path is what you get with STABLEVAR_NUMBA=0; this script times
both implementations directly regardless of the flag.
"""

import math
import time

import numpy as np

from stablevar import _kernels as K


def best_of(fn, repeats=5):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    if not K.NUMBA_ENABLED:
        raise SystemExit("numba path unavailable (flag off or numba missing); nothing to compare")

    rng = np.random.default_rng(0)

    cases = []

    phi = rng.uniform(-0.5 * np.pi, 0.5 * np.pi, 1_000_000)
    w = rng.standard_exponential(1_000_000)
    cases.append(
        ("stable_transform 1e6 (alpha=1.6)",
         lambda: K.py_stable_transform(phi, w, 1.6, 0.0),
         lambda: K.nb_stable_transform(phi, w, 1.6, 0.0))
    )

    coeffs = np.stack([np.array([[0.1, 0.3], [0.2, 0.1]]), np.array([[0.2, 0.2], [0.05, 0.1]])])
    noise = rng.standard_normal((100_000, 2))
    cases.append(
        ("var_recursion 1e5 x 2 (p=2)",
         lambda: K.py_var_recursion(coeffs, noise),
         lambda: K.nb_var_recursion(coeffs, noise))
    )

    xi = rng.standard_normal(1_000_000)
    xj = rng.standard_normal(1_000_000)
    cases.append(
        ("cross_floc_sum 1e6 (A=1, B=0.55, k=3)",
         lambda: K.py_cross_floc_sum(xi, xj, 3, 1.0, 0.55),
         lambda: K.nb_cross_floc_sum(xi, xj, 3, 1.0, 0.55))
    )

    z = np.sort(rng.standard_normal(600) * 5.0)
    t = np.linspace(1e-3, 10.0, 3000)
    amp = np.exp(-(t**1.6)) / t * (10.0 / 3000.0)
    ph = np.zeros_like(t)
    cases.append(
        ("gil_pelaez_cdf 600 x 3000",
         lambda: K.py_gil_pelaez_cdf(z, t, amp, ph, 1e-3),
         lambda: K.nb_gil_pelaez_cdf(z, t, amp, ph, 1e-3))
    )

    print(f"{'kernel':42} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for name, py_fn, nb_fn in cases:
        nb_fn()  # trigger JIT outside the timed region
        t_py = best_of(py_fn)
        t_nb = best_of(nb_fn)
        print(f"{name:42} {t_py * 1e3:9.2f}ms {t_nb * 1e3:9.2f}ms {t_py / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
