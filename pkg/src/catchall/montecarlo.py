"""Replicated experiments: bias and variance of the horizon-k estimator, spectral coverage.

Replication ``r`` uses the seed ``derive_seed(master_seed, r)``, the first
64-bit word produced by ``numpy.random.SeedSequence((master_seed, r))``.
Each replication owns its generators, results are written into a buffer
indexed by ``r``, and aggregation runs in fixed order. Tables are therefore
identical whether replications run serially or on a thread pool.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import CatchallError, ParameterError
from .estimate import WeightScheme, estimate_catchall, horizon_moments, pseudo_true
from .model import StructuralParams, asy_variance_factor, plim_k
from .simulate import SimConfig, observe, simulate_latent
from .spectral import (default_half_width, find_features, fourier_frequencies,
                       identification_bounds, noise_variance_bound, periodogram, smooth,
                       spectrum_ar1)

__all__ = [
    "ExperimentConfig",
    "BiasRow",
    "BiasTable",
    "VarianceRow",
    "VarianceTable",
    "SpectralCoverage",
    "derive_seed",
    "replicate_estimates",
    "run_bias_experiment",
    "run_variance_experiment",
    "run_spectral_coverage",
]


@dataclass(frozen=True)
class ExperimentConfig:
    dgp: StructuralParams
    sample_size: int
    replications: int
    horizons: tuple[int, ...] = (1, 2, 5, 10)
    weights: WeightScheme | None = None
    master_seed: int = 20240101
    parallel: bool = False
    workers: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "horizons", tuple(int(k) for k in self.horizons))
        if int(self.sample_size) != self.sample_size or self.sample_size < 8:
            raise ParameterError(f"sample size must be an integer >= 8, got {self.sample_size!r}")
        if int(self.replications) != self.replications or self.replications < 2:
            raise ParameterError(f"replications must be an integer >= 2, got {self.replications!r}")
        if not self.horizons and self.weights is None:
            raise ParameterError("configure at least one horizon or a weight scheme")
        if any(k < 1 for k in self.horizons):
            raise ParameterError("horizons must be >= 1")
        max_k = max(self.horizons + ((self.weights.max_k,) if self.weights else ()))
        if max_k > self.sample_size - 2:
            raise ParameterError(f"max horizon {max_k} exceeds T-2 = {self.sample_size - 2}")
        if not 0 <= self.master_seed < 2 ** 64:
            raise ParameterError("master seed must be a 64-bit unsigned integer")


def derive_seed(master_seed: int, r: int) -> int:
    ss = np.random.SeedSequence((int(master_seed), int(r)))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _observed_path(cfg: ExperimentConfig, r: int):
    seed = derive_seed(cfg.master_seed, r)
    x = simulate_latent(cfg.dgp, SimConfig(cfg.sample_size, 0, seed))
    return observe(x, cfg.dgp.sigma2_eta, seed)


def _map_replications(fn, cfg: ExperimentConfig) -> list:
    reps = range(cfg.replications)
    if not cfg.parallel:
        return [fn(r) for r in reps]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(fn, reps))


def _estimates_one(cfg: ExperimentConfig, r: int) -> np.ndarray:
    """Closed-form estimate per horizon (NaN where the moment ratio is <= 0),
    followed by the catch-all estimate when weights are configured."""
    y = _observed_path(cfg, r)
    out = np.full(len(cfg.horizons) + (1 if cfg.weights else 0), np.nan)
    if cfg.horizons:
        mom = horizon_moments(y, cfg.horizons)
        for i, k in enumerate(cfg.horizons):
            if mom.head[i] > 0.0:
                ratio = mom.cross[i] / mom.head[i]
                if ratio > 0.0:
                    out[i] = ratio ** (1.0 / k)
    if cfg.weights is not None:
        try:
            out[-1] = estimate_catchall(y, cfg.weights).theta_hat
        except CatchallError:
            pass
    return out


def replicate_estimates(cfg: ExperimentConfig) -> np.ndarray:
    """``(R, n_columns)`` array of estimates, NaN marking failed replications."""
    rows = _map_replications(lambda r: _estimates_one(cfg, r), cfg)
    return np.vstack(rows)


def _labels(cfg: ExperimentConfig) -> list[str]:
    labels = [str(k) for k in cfg.horizons]
    if cfg.weights is not None:
        labels.append("w=" + cfg.weights.label())
    return labels


@dataclass(frozen=True)
class BiasRow:
    horizon: str
    n_ok: int
    failures: int
    mean: float
    sd: float
    plim: float
    mean_minus_plim: float
    mcse: float


@dataclass(frozen=True)
class BiasTable:
    config: ExperimentConfig
    rows: tuple[BiasRow, ...]

    columns = ("k", "n_ok", "failures", "mean", "sd", "plim", "mean_minus_plim", "mcse")

    def records(self):
        for r in self.rows:
            yield (r.horizon, r.n_ok, r.failures, r.mean, r.sd, r.plim, r.mean_minus_plim, r.mcse)

    def row(self, horizon) -> BiasRow:
        for r in self.rows:
            if r.horizon == str(horizon):
                return r
        raise KeyError(horizon)


def _moments(col: np.ndarray):
    ok = col[~np.isnan(col)]
    n = ok.shape[0]
    mean = float(ok.mean()) if n else math.nan
    sd = float(ok.std(ddof=1)) if n > 1 else math.nan
    return ok, n, mean, sd


def run_bias_experiment(cfg: ExperimentConfig) -> BiasTable:
    est = replicate_estimates(cfg)
    oracles = [plim_k(cfg.dgp, k) for k in cfg.horizons]
    if cfg.weights is not None:
        oracles.append(pseudo_true(cfg.dgp, cfg.weights))
    rows = []
    for j, (label, oracle) in enumerate(zip(_labels(cfg), oracles)):
        _, n, mean, sd = _moments(est[:, j])
        mcse = sd / math.sqrt(n) if n > 1 else math.nan
        rows.append(BiasRow(label, n, cfg.replications - n, mean, sd, oracle, mean - oracle, mcse))
    return BiasTable(cfg, tuple(rows))


@dataclass(frozen=True)
class VarianceRow:
    horizon: str
    n_ok: int
    failures: int
    t_var: float
    oracle: float
    ratio: float


@dataclass(frozen=True)
class VarianceTable:
    config: ExperimentConfig
    rows: tuple[VarianceRow, ...]

    columns = ("k", "n_ok", "failures", "t_var", "oracle", "ratio")

    def records(self):
        for r in self.rows:
            yield (r.horizon, r.n_ok, r.failures, r.t_var, r.oracle, r.ratio)

    def row(self, horizon) -> VarianceRow:
        for r in self.rows:
            if r.horizon == str(horizon):
                return r
        raise KeyError(horizon)


def run_variance_experiment(cfg: ExperimentConfig) -> VarianceTable:
    """Empirical ``T * var`` of each horizon's estimator next to ``(1 / (k theta^k))**2``."""
    est = replicate_estimates(cfg)
    rows = []
    for j, label in enumerate(_labels(cfg)):
        _, n, _, sd = _moments(est[:, j])
        t_var = cfg.sample_size * sd * sd if n > 1 else math.nan
        if j < len(cfg.horizons) and cfg.dgp.theta > 0.0:
            oracle = asy_variance_factor(cfg.dgp.theta, cfg.horizons[j])
        else:
            oracle = math.nan
        rows.append(VarianceRow(label, n, cfg.replications - n, t_var, oracle, t_var / oracle))
    return VarianceTable(cfg, tuple(rows))


@dataclass(frozen=True)
class SpectralCoverage:
    """Per-replication spectral diagnostics and their aggregates.

    ``coverage`` is the fraction of interior Fourier frequencies (at least
    ``m`` ordinates away from either end) where the latent spectrum lies in
    the estimated interval. ``peak_bin`` is the Fourier index ``j`` of the
    highest smoothed ordinate; the latent spectrum peaks at ``j = 0`` when
    theta > 0.
    """

    config: ExperimentConfig
    half_width: int
    coverage: np.ndarray
    f_bar: np.ndarray
    peak_bin: np.ndarray
    sigma2_eta: float = field(default=0.0)

    columns = ("rep", "coverage", "f_bar", "bound_holds", "peak_bin")

    @property
    def bound_holds(self) -> np.ndarray:
        return self.f_bar >= self.sigma2_eta

    @property
    def mean_coverage(self) -> float:
        return float(self.coverage.mean())

    @property
    def bound_rate(self) -> float:
        return float(self.bound_holds.mean())

    def peak_rate(self, within_bins: int = 2) -> float:
        return float(np.mean(self.peak_bin <= within_bins))

    def records(self):
        for r in range(self.coverage.shape[0]):
            yield (r, float(self.coverage[r]), float(self.f_bar[r]),
                   int(self.bound_holds[r]), int(self.peak_bin[r]))

    def summary(self) -> dict:
        return {
            "replications": int(self.coverage.shape[0]),
            "half_width": self.half_width,
            "mean_coverage": self.mean_coverage,
            "bound_rate": self.bound_rate,
            "peak_within_2_bins_rate": self.peak_rate(2),
            "median_f_bar": float(np.median(self.f_bar)),
        }


def _spectral_one(cfg: ExperimentConfig, m: int, fx: np.ndarray, r: int):
    y = _observed_path(cfg, r)
    sm = smooth(periodogram(y), m)
    b = identification_bounds(sm)
    interior = slice(m, len(sm) - m)
    inside = (fx >= b.lower.values) & (fx <= b.upper.values)
    feats = find_features(sm)
    peak = feats.global_peak()
    peak_bin = peak[0] + 1 if peak is not None else -1
    return float(inside[interior].mean()), noise_variance_bound(b), peak_bin


def run_spectral_coverage(cfg: ExperimentConfig, half_width: int | None = None) -> SpectralCoverage:
    n = cfg.sample_size
    m = default_half_width(n) if half_width is None else int(half_width)
    if not 1 <= m <= n // 4:
        raise ParameterError(f"half width must lie in [1, {n // 4}], got {m!r}")
    fx = spectrum_ar1(cfg.dgp, fourier_frequencies(n)).values
    out = _map_replications(lambda r: _spectral_one(cfg, m, fx, r), cfg)
    cov = np.array([o[0] for o in out])
    fbar = np.array([o[1] for o in out])
    peak = np.array([o[2] for o in out], dtype=np.int64)
    return SpectralCoverage(cfg, m, cov, fbar, peak, cfg.dgp.sigma2_eta)
