"""Monte Carlo harness and end-to-end pipeline.

``run_monte_carlo`` simulates many realisations of a known model, estimates
the coefficients with each requested method, and reports per-coefficient
means and RMSEs. Replication i always draws from substream (seed, i), so
adding methods or changing worker counts never perturbs the simulated
paths, and reports are reproducible byte for byte.

``run_pipeline`` is the real-data path: mean-correct, pick the FLOC
exponent from per-column stability estimates, estimate the coefficients,
and run residual diagnostics per component.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .diagnostics import (
    AutoFlocSeries,
    KsTestResult,
    QqData,
    auto_floc,
    auto_floc_null_band,
    ks_test_stable,
    qq_data,
)
from .errors import NumericalError, ValidationError
from .estimators import EstimationReport, estimate_floc, estimate_ls, estimate_yw
from .floc import FlocConfig
from .seeding import substream
from .series import SeriesMatrix
from .stable_noise import StableParams, SymmetricStableNoiseSpec, fit_stable_params
from .var_core import DEFAULT_BURN_IN, VarModel, mean_correct, simulate

__all__ = [
    "ExperimentConfig",
    "CellStats",
    "MonteCarloReport",
    "run_monte_carlo",
    "ColumnDiagnostics",
    "PipelineReport",
    "run_pipeline",
    "load_experiment_config",
    "load_model_config",
    "coefficient_label",
]

_METHODS = ("floc", "ls", "yw")
DEFAULT_B_OFFSET = 1.05  # working default B = alpha_hat - 1.05, clamped at 0


@dataclass(frozen=True)
class ExperimentConfig:
    """Monte Carlo study description: truth, sample size, estimator grid."""

    model: VarModel
    n: int
    b_values: tuple
    replications: int
    seed: int
    methods: tuple = _METHODS
    burn_in: int = DEFAULT_BURN_IN
    workers: int = 1

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValidationError(f"n must be >= 1, got {self.n}")
        if self.replications < 1:
            raise ValidationError(f"replications must be >= 1, got {self.replications}")
        if self.burn_in < 0:
            raise ValidationError(f"burn_in must be >= 0, got {self.burn_in}")
        if self.workers < 1:
            raise ValidationError(f"workers must be >= 1, got {self.workers}")
        if self.seed < 0:
            raise ValidationError(f"seed must be >= 0, got {self.seed}")
        methods = tuple(m.lower() for m in self.methods)
        if not methods:
            raise ValidationError("at least one method is required")
        for m in methods:
            if m not in _METHODS:
                raise ValidationError(f"unknown method {m!r}; choose from {_METHODS}")
        b_values = tuple(float(b) for b in self.b_values)
        for b in b_values:
            if b < 0.0:
                raise ValidationError(f"B values must be >= 0, got {b}")
        if "floc" in methods and not b_values:
            raise ValidationError("b_values must be nonempty for FLOC runs")
        object.__setattr__(self, "methods", methods)
        object.__setattr__(self, "b_values", b_values)


def coefficient_label(k: int, i: int, j: int, r: int) -> str:
    """Column-major label within each lag block: A_1 = [[a1, a3], [a2, a4]]."""
    return f"a{(k - 1) * r * r + (j - 1) * r + i}"


@dataclass(frozen=True)
class CellStats:
    method: str
    b: Optional[float]
    k: int
    i: int
    j: int
    label: str
    true_value: float
    mean: float
    rmse: float
    used: int


@dataclass(frozen=True)
class MonteCarloReport:
    config: ExperimentConfig
    cells: tuple
    failures: Dict[Tuple[str, Optional[float]], int]
    failed_replications: int

    def cell(self, method: str, b: Optional[float], k: int, i: int, j: int) -> CellStats:
        for c in self.cells:
            if (c.method, c.b, c.k, c.i, c.j) == (method, b, k, i, j):
                return c
        raise KeyError((method, b, k, i, j))

    def estimate_keys(self):
        keys = []
        for method in self.config.methods:
            if method == "floc":
                keys.extend(("floc", b) for b in self.config.b_values)
            else:
                keys.append((method, None))
        return keys

    def to_long_csv(self, path) -> None:
        """`method,b,coefficient,k,i,j,true,mean,rmse,used` rows."""
        with open(path, "w", newline="") as fh:
            fh.write("method,b,coefficient,k,i,j,true,mean,rmse,used\n")
            for c in self.cells:
                b_txt = "" if c.b is None else f"{c.b:.17g}"
                fh.write(
                    f"{c.method},{b_txt},{c.label},{c.k},{c.i},{c.j},"
                    f"{c.true_value:.17g},{c.mean:.17g},{c.rmse:.17g},{c.used}\n"
                )

    def to_wide_csv(self, path, method: str) -> None:
        """Table-style layout: one row per coefficient, mean/RMSE per B column."""
        if method == "floc":
            bs = list(self.config.b_values)
            cols = [f"B={b:g} mean,B={b:g} rmse" for b in bs]
        else:
            bs = [None]
            cols = ["mean,rmse"]
        r, p = self.config.model.dim, self.config.model.order
        with open(path, "w", newline="") as fh:
            fh.write("coefficient,true," + ",".join(cols) + "\n")
            for k in range(1, p + 1):
                for j in range(1, r + 1):
                    for i in range(1, r + 1):
                        cells = [self.cell(method, b, k, i, j) for b in bs]
                        row = ",".join(f"{c.mean:.6g},{c.rmse:.6g}" for c in cells)
                        fh.write(
                            f"{cells[0].label},{cells[0].true_value:.17g},{row}\n"
                        )

    def summary_text(self) -> str:
        cfg = self.config
        lines = [
            f"replications: {cfg.replications}",
            f"n: {cfg.n}",
            f"burn_in: {cfg.burn_in}",
            f"seed: {cfg.seed}",
            f"methods: {','.join(cfg.methods)}",
            "b_values: " + ",".join(f"{b:g}" for b in cfg.b_values),
            f"failed_replications: {self.failed_replications}",
        ]
        for key in self.estimate_keys():
            method, b = key
            name = method if b is None else f"{method} B={b:g}"
            lines.append(f"failures[{name}]: {self.failures.get(key, 0)}")
        return "\n".join(lines) + "\n"


def _estimate_keys(cfg: ExperimentConfig):
    keys = []
    for method in cfg.methods:
        if method == "floc":
            keys.extend(("floc", b) for b in cfg.b_values)
        else:
            keys.append((method, None))
    return keys


def _one_replication(cfg: ExperimentConfig, rep: int):
    series = simulate(cfg.model, cfg.n, cfg.burn_in, substream(cfg.seed, rep))
    out = {}
    for method, b in _estimate_keys(cfg):
        try:
            if method == "floc":
                report = estimate_floc(series, cfg.model.order, FlocConfig(1.0, b))
            elif method == "ls":
                report = estimate_ls(series, cfg.model.order)
            else:
                report = estimate_yw(series, cfg.model.order)
            out[(method, b)] = report.coeff_array()
        except (NumericalError, ValidationError):
            out[(method, b)] = None
    return out


def run_monte_carlo(cfg: ExperimentConfig) -> MonteCarloReport:
    """Mean and RMSE of every coefficient estimate over seeded replications.

    Failed replications (singular systems) are counted per estimator and
    excluded from the statistics; the run aborts if any estimator fails in
    more than 1% of replications.
    """
    reps = range(cfg.replications)
    if cfg.workers == 1:
        results = [_one_replication(cfg, rep) for rep in reps]
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(lambda rep: _one_replication(cfg, rep), reps))

    keys = _estimate_keys(cfg)
    failures = {key: sum(1 for res in results if res[key] is None) for key in keys}
    failed_replications = sum(
        1 for res in results if any(res[key] is None for key in keys)
    )
    for key, count in failures.items():
        if count > 0.01 * cfg.replications:
            method, b = key
            name = method if b is None else f"{method} B={b:g}"
            raise NumericalError(
                f"{name} failed in {count} of {cfg.replications} replications (> 1%)"
            )

    truth = cfg.model.coeff_array()
    r, p = cfg.model.dim, cfg.model.order
    cells = []
    for method, b in keys:
        stack = np.stack([res[(method, b)] for res in results if res[(method, b)] is not None])
        mean = stack.mean(axis=0)
        rmse = np.sqrt(((stack - truth) ** 2).mean(axis=0))
        used = stack.shape[0]
        for k in range(1, p + 1):
            for j in range(1, r + 1):
                for i in range(1, r + 1):
                    cells.append(
                        CellStats(
                            method=method,
                            b=b,
                            k=k,
                            i=i,
                            j=j,
                            label=coefficient_label(k, i, j, r),
                            true_value=float(truth[k - 1, i - 1, j - 1]),
                            mean=float(mean[k - 1, i - 1, j - 1]),
                            rmse=float(rmse[k - 1, i - 1, j - 1]),
                            used=used,
                        )
                    )
    return MonteCarloReport(
        config=cfg,
        cells=tuple(cells),
        failures=failures,
        failed_replications=failed_replications,
    )


# ---------------------------------------------------------------------------
# full pipeline on observed data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ColumnDiagnostics:
    fitted: StableParams
    auto_floc: AutoFlocSeries
    band_lo: np.ndarray
    band_hi: np.ndarray
    ks: KsTestResult
    qq: Optional[QqData]


@dataclass(frozen=True)
class PipelineReport:
    estimation: EstimationReport
    alpha_estimates: np.ndarray
    b_used: float
    columns: tuple


def _child_seed(seed: int, *path: int) -> int:
    return int(np.random.SeedSequence([int(seed), *path]).generate_state(1, np.uint64)[0])


def run_pipeline(
    series: SeriesMatrix,
    p: int,
    b: Optional[float] = None,
    rng_seed: int = 0,
    ks_repetitions: int = 100,
    max_lag: int = 20,
    band_replicates: int = 200,
    qq_grid: int = 99,
) -> PipelineReport:
    """Estimate a FLOC VAR(p) on observed data and diagnose the residuals.

    When ``b`` is omitted it defaults to max over per-column stability
    estimates minus 1.05 (clamped at 0). Diagnostics per residual column:
    stable parameter fit, auto-FLOC with a simulated null band, bootstrap
    KS test, and optional QQ data (``qq_grid = 0`` skips it).
    """
    corrected = mean_correct(series)
    alphas = np.array(
        [fit_stable_params(corrected.values[:, j]).alpha for j in range(series.dim)]
    )
    if b is None:
        b = max(float(np.max(alphas)) - DEFAULT_B_OFFSET, 0.0)
    cfg = FlocConfig(1.0, float(b))
    cfg.warn_if_invalid_for(float(np.min(alphas)))
    estimation = estimate_floc(series, p, cfg)

    columns = []
    for j in range(series.dim):
        col = estimation.residuals.values[:, j]
        fitted = fit_stable_params(col)
        b_col = max(fitted.alpha - DEFAULT_B_OFFSET, 0.0)
        cfg_col = FlocConfig(1.0, b_col)
        af = auto_floc(col, max_lag, cfg_col)
        lo, hi = auto_floc_null_band(
            fitted,
            col.shape[0],
            max_lag,
            cfg_col,
            replicates=band_replicates,
            rng_seed=_child_seed(rng_seed, 2, j),
        )
        ks = ks_test_stable(col, ks_repetitions, rng_seed=_child_seed(rng_seed, 1, j))
        qq = qq_data(col, fitted, qq_grid) if qq_grid else None
        columns.append(
            ColumnDiagnostics(
                fitted=fitted, auto_floc=af, band_lo=lo, band_hi=hi, ks=ks, qq=qq
            )
        )
    return PipelineReport(
        estimation=estimation,
        alpha_estimates=alphas,
        b_used=float(b),
        columns=tuple(columns),
    )


# ---------------------------------------------------------------------------
# flat key=value config files
# ---------------------------------------------------------------------------


def _parse_kv(path) -> Dict[str, str]:
    out: Dict[str, str] = {}
    with open(path, "r") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValidationError(f"{path}:{lineno}: expected key = value")
            key, value = line.split("=", 1)
            key = key.strip().lower()
            if key in out:
                raise ValidationError(f"{path}:{lineno}: duplicate key {key!r}")
            out[key] = value.strip()
    if not out:
        raise ValidationError(f"{path}: empty config")
    return out


def _parse_floats(text: str, what: str) -> list:
    try:
        return [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise ValidationError(f"bad {what}: {exc}") from exc


def _parse_int(kv: Dict[str, str], key: str, default: Optional[int] = None) -> int:
    if key not in kv:
        if default is None:
            raise ValidationError(f"missing required key {key!r}")
        return default
    try:
        return int(kv[key])
    except ValueError as exc:
        raise ValidationError(f"bad {key}: {exc}") from exc


def _build_model(kv: Dict[str, str]) -> VarModel:
    dim = _parse_int(kv, "dim")
    order = _parse_int(kv, "order")
    if dim < 1 or order < 1:
        raise ValidationError("dim and order must be >= 1")
    coeffs = []
    for k in range(1, order + 1):
        key = f"a{k}"
        if key not in kv:
            raise ValidationError(f"missing coefficient matrix {key!r}")
        vals = _parse_floats(kv[key], key)
        if len(vals) != dim * dim:
            raise ValidationError(
                f"{key} needs {dim * dim} row-major entries, got {len(vals)}"
            )
        coeffs.append(np.array(vals).reshape(dim, dim))
    alphas = _parse_floats(kv.get("alpha", ""), "alpha")
    if not alphas:
        raise ValidationError("missing required key 'alpha'")
    if len(alphas) == 1:
        alphas = alphas * dim
    if len(alphas) != dim:
        raise ValidationError(f"alpha needs 1 or {dim} values, got {len(alphas)}")
    sigmas = _parse_floats(kv.get("sigma", "1.0"), "sigma")
    if len(sigmas) == 1:
        sigmas = sigmas * dim
    if len(sigmas) != dim:
        raise ValidationError(f"sigma needs 1 or {dim} values, got {len(sigmas)}")
    noise = SymmetricStableNoiseSpec(
        tuple(StableParams.symmetric(a, s) for a, s in zip(alphas, sigmas))
    )
    return VarModel(coeffs=tuple(coeffs), noise=noise)


_MODEL_KEYS = {"dim", "order", "alpha", "sigma", "n", "burn_in", "seed"}
_EXPERIMENT_KEYS = _MODEL_KEYS | {"b_values", "replications", "methods", "workers"}


def _check_keys(kv: Dict[str, str], allowed: set, order: int, path) -> None:
    coeff_keys = {f"a{k}" for k in range(1, order + 1)}
    unknown = set(kv) - allowed - coeff_keys
    if unknown:
        raise ValidationError(f"{path}: unknown key(s) {sorted(unknown)}")


def load_model_config(path) -> Tuple[VarModel, Dict[str, str]]:
    """Read a model description; returns the model and the raw keys."""
    kv = _parse_kv(path)
    model = _build_model(kv)
    _check_keys(kv, _MODEL_KEYS, model.order, path)
    return model, kv


def load_experiment_config(path) -> ExperimentConfig:
    kv = _parse_kv(path)
    model = _build_model(kv)
    _check_keys(kv, _EXPERIMENT_KEYS, model.order, path)
    methods = tuple(
        m.strip().lower() for m in kv.get("methods", "floc,ls,yw").split(",") if m.strip()
    )
    return ExperimentConfig(
        model=model,
        n=_parse_int(kv, "n"),
        b_values=tuple(_parse_floats(kv.get("b_values", ""), "b_values")),
        replications=_parse_int(kv, "replications"),
        seed=_parse_int(kv, "seed"),
        methods=methods,
        burn_in=_parse_int(kv, "burn_in", DEFAULT_BURN_IN),
        workers=_parse_int(kv, "workers", 1),
    )
