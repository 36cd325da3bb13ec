"""Seed-reproducible simulation of latent, observed and ARMA(1,1) paths.

Random numbers come from numpy's PCG64 bit generator. A user seed and a
stream id are combined through ``SeedSequence(seed, spawn_key=(stream,))``,
so the latent innovations, measurement noise and ARMA innovations drawn
from one seed are independent streams, and a path is a pure function of
(parameters, config, seed).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ParameterError, SeriesTooShortError
from .model import Arma11Params, StructuralParams, latent_variance

__all__ = [
    "RNG_ALGORITHM",
    "Origin",
    "SeriesPath",
    "SimConfig",
    "make_rng",
    "simulate_latent",
    "observe",
    "simulate_arma",
    "simulate_observed",
    "sample_autocov",
]

RNG_ALGORITHM = "numpy.random.PCG64/SeedSequence(seed, spawn_key=(stream,))/standard_normal"

STREAM_LATENT = 0
STREAM_NOISE = 1
STREAM_ARMA = 2


class Origin(str, enum.Enum):
    LATENT = "latent"
    OBSERVED = "observed"
    ARMA = "arma"
    INGESTED = "ingested"


@dataclass(frozen=True, eq=False)
class SeriesPath:
    """A univariate series indexed from t=1. ``values`` is stored read-only."""

    values: np.ndarray
    origin: Origin = Origin.INGESTED
    seed: int | None = None

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64, copy=True).ravel()
        if v.size < 2:
            raise SeriesTooShortError(f"a series needs at least 2 values, got {v.size}")
        if not np.all(np.isfinite(v)):
            raise ParameterError("series contains non-finite values")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "origin", Origin(self.origin))

    def __len__(self):
        return self.values.shape[0]

    def __eq__(self, other):
        if not isinstance(other, SeriesPath):
            return NotImplemented
        return (self.origin == other.origin and self.seed == other.seed
                and np.array_equal(self.values, other.values))

    __hash__ = None


@dataclass(frozen=True)
class SimConfig:
    length: int
    burn_in: int = 0
    seed: int = 0
    innovation: str = "gaussian"

    def __post_init__(self):
        if int(self.length) != self.length or self.length < 2:
            raise ParameterError(f"length must be an integer >= 2, got {self.length!r}")
        if int(self.burn_in) != self.burn_in or self.burn_in < 0:
            raise ParameterError(f"burn_in must be an integer >= 0, got {self.burn_in!r}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2 ** 64:
            raise ParameterError(f"seed must be an integer in [0, 2**64), got {self.seed!r}")
        if self.innovation != "gaussian":
            raise ParameterError(f"unsupported innovation distribution {self.innovation!r}")


def make_rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=(stream,))))


def _draw(rng, n, variance):
    return rng.standard_normal(n) * math.sqrt(variance)


def simulate_latent(p: StructuralParams, cfg: SimConfig) -> SeriesPath:
    """Latent AR(1) started from its stationary law; the first ``burn_in`` steps are dropped."""
    rng = make_rng(cfg.seed, STREAM_LATENT)
    x0 = _draw(rng, 1, latent_variance(p))[0]
    eps = _draw(rng, cfg.burn_in + cfg.length, p.sigma2_eps)
    x = kernels.ar1_recursion(float(x0), float(p.theta), eps)
    return SeriesPath(x[cfg.burn_in:], Origin.LATENT, cfg.seed)


def observe(x: SeriesPath, sigma2_eta: float, seed: int) -> SeriesPath:
    """Add i.i.d. Gaussian noise of variance ``sigma2_eta`` drawn from the noise stream of ``seed``."""
    if not math.isfinite(sigma2_eta) or sigma2_eta < 0.0:
        raise ParameterError(f"noise variance must be >= 0, got {sigma2_eta!r}")
    if sigma2_eta == 0.0:
        return SeriesPath(x.values, Origin.OBSERVED, seed)
    rng = make_rng(seed, STREAM_NOISE)
    return SeriesPath(x.values + _draw(rng, len(x), sigma2_eta), Origin.OBSERVED, seed)


def simulate_observed(p: StructuralParams, cfg: SimConfig) -> tuple[SeriesPath, SeriesPath]:
    """Convenience: latent path and its noisy observation from one seed."""
    x = simulate_latent(p, cfg)
    return x, observe(x, p.sigma2_eta, cfg.seed)


def simulate_arma(a: Arma11Params, cfg: SimConfig) -> SeriesPath:
    """ARMA(1,1) path started from the exact joint stationary law of ``(y_0, u_0)``."""
    rng = make_rng(cfg.seed, STREAM_ARMA)
    z = rng.standard_normal(2)
    u0 = z[0] * math.sqrt(a.sigma2_u)
    # var(y0 - u0) = sigma2_u (theta - alpha)^2 / (1 - theta^2)
    rest = a.sigma2_u * (a.theta - a.alpha) ** 2 / (1.0 - a.theta * a.theta)
    y0 = u0 + z[1] * math.sqrt(rest)
    u = _draw(rng, cfg.burn_in + cfg.length, a.sigma2_u)
    y = kernels.arma11_recursion(float(y0), float(u0), float(a.theta), float(a.alpha), u)
    return SeriesPath(y[cfg.burn_in:], Origin.ARMA, cfg.seed)


def sample_autocov(values, max_lag: int) -> np.ndarray:
    """Biased (divide-by-T) sample autocovariances about zero, lags 0..max_lag."""
    v = np.asarray(values, dtype=np.float64)
    n = v.shape[0]
    return np.array([v[: n - h] @ v[h:] / n for h in range(max_lag + 1)])
