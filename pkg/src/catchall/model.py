"""Latent AR(1) plus white measurement noise: types and population oracles.

The latent process is ``x_t = theta * x_{t-1} + eps_t`` and the observed
series is ``y_t = x_t + eta_t``, with ``eps`` and ``eta`` independent white
noise. The observed series is an ARMA(1,1)::

    y_t = theta * y_{t-1} + u_t - alpha * u_{t-1}

Everything in this module is exact and closed form; it is the oracle that
simulation and estimation are checked against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterError

__all__ = [
    "StructuralParams",
    "Arma11Params",
    "ReducedMoments",
    "HorizonSpec",
    "latent_variance",
    "autocov_y",
    "arma_autocov",
    "reduce_to_arma",
    "bias_constant",
    "plim_k",
    "asy_variance_factor",
    "variance_growth_threshold",
]


def _finite(name, value):
    if not math.isfinite(value):
        raise ParameterError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class StructuralParams:
    """Truth of the latent model.

    ``theta`` is restricted to ``[0, 1)``. ``theta == 0`` (white latent
    process) and ``sigma2_eps == 0`` are accepted as degenerate cases;
    operations that divide by ``theta`` reject them individually.
    """

    theta: float
    sigma2_eps: float
    sigma2_eta: float

    def __post_init__(self):
        for name in ("theta", "sigma2_eps", "sigma2_eta"):
            _finite(name, getattr(self, name))
        if not 0.0 <= self.theta < 1.0:
            raise ParameterError(f"theta must lie in [0, 1), got {self.theta!r}")
        if self.sigma2_eps < 0.0:
            raise ParameterError(f"sigma2_eps must be >= 0, got {self.sigma2_eps!r}")
        if self.sigma2_eta < 0.0:
            raise ParameterError(f"sigma2_eta must be >= 0, got {self.sigma2_eta!r}")


@dataclass(frozen=True)
class Arma11Params:
    """Observable ARMA(1,1): AR coefficient, invertible MA coefficient, innovation variance."""

    theta: float
    alpha: float
    sigma2_u: float

    def __post_init__(self):
        for name in ("theta", "alpha", "sigma2_u"):
            _finite(name, getattr(self, name))
        if not -1.0 < self.theta < 1.0:
            raise ParameterError(f"theta must be stationary, got {self.theta!r}")
        if not 0.0 <= self.alpha < 1.0:
            raise ParameterError(f"alpha must lie in [0, 1), got {self.alpha!r}")
        if self.sigma2_u < 0.0:
            raise ParameterError(f"sigma2_u must be >= 0, got {self.sigma2_u!r}")


@dataclass(frozen=True)
class ReducedMoments:
    sigma2_x: float
    sigma2_y: float
    c: float


@dataclass(frozen=True)
class HorizonSpec:
    k: int

    def __post_init__(self):
        if isinstance(self.k, bool) or int(self.k) != self.k or self.k < 1:
            raise ParameterError(f"horizon k must be an integer >= 1, got {self.k!r}")
        object.__setattr__(self, "k", int(self.k))


def _as_k(k) -> int:
    return k.k if isinstance(k, HorizonSpec) else HorizonSpec(k).k


def latent_variance(p: StructuralParams) -> float:
    """Stationary variance of the latent AR(1)."""
    return p.sigma2_eps / (1.0 - p.theta * p.theta)


def autocov_y(p: StructuralParams, h: int) -> float:
    """Population autocovariance of the observed series at lag ``h``.

    The i.i.d. noise only enters at lag 0.
    """
    if h < 0:
        raise ParameterError(f"lag must be >= 0, got {h!r}")
    sx = latent_variance(p)
    if h == 0:
        return sx + p.sigma2_eta
    return p.theta ** h * sx


def arma_autocov(a: Arma11Params, h: int) -> float:
    """Autocovariance of an ARMA(1,1) at lag ``h``."""
    if h < 0:
        raise ParameterError(f"lag must be >= 0, got {h!r}")
    g0 = a.sigma2_u * (1.0 + a.alpha * a.alpha - 2.0 * a.theta * a.alpha) / (1.0 - a.theta * a.theta)
    if h == 0:
        return g0
    g1 = a.theta * g0 - a.alpha * a.sigma2_u
    return a.theta ** (h - 1) * g1


def reduce_to_arma(p: StructuralParams) -> Arma11Params:
    """ARMA(1,1) representation of the observed series.

    Matching lag-0 and lag-1 autocovariances gives ``alpha * sigma2_u =
    theta * sigma2_eta`` and, after eliminating ``sigma2_u``, the quadratic

        theta*s2eta * a**2 - (s2eps + (1 + theta**2)*s2eta) * a + theta*s2eta = 0

    whose roots are reciprocal; the invertible one is taken.
    """
    if p.sigma2_eta == 0.0:
        return Arma11Params(p.theta, 0.0, p.sigma2_eps)
    if p.theta == 0.0:
        # y is white noise: no MA part
        return Arma11Params(0.0, 0.0, p.sigma2_eps + p.sigma2_eta)
    a2 = p.theta * p.sigma2_eta
    b = p.sigma2_eps + (1.0 + p.theta * p.theta) * p.sigma2_eta
    disc = b * b - 4.0 * a2 * a2
    if disc < 0.0:
        if disc > -1e-12 * b * b:
            disc = 0.0
        else:  # pragma: no cover - impossible for valid inputs
            raise ArithmeticError(f"no invertible root: discriminant {disc!r}")
    # small root written without cancellation; sigma2_u = a2 / alpha = (b + sqrt(disc)) / 2
    big = b + math.sqrt(disc)
    return Arma11Params(p.theta, 2.0 * a2 / big, 0.5 * big)


def bias_constant(p: StructuralParams) -> ReducedMoments:
    """Bias constant ``c = alpha * sigma2_u / (theta * sigma2_y)`` with the variances.

    Cross-checked against the identity ``1 - c = sigma2_x / sigma2_y``.
    """
    if p.theta <= 0.0:
        raise ParameterError("bias constant requires theta > 0")
    sx = latent_variance(p)
    sy = sx + p.sigma2_eta
    if sy <= 0.0:
        raise ParameterError("observed variance is zero")
    a = reduce_to_arma(p)
    c = a.alpha * a.sigma2_u / (p.theta * sy)
    if abs((1.0 - c) - sx / sy) > 1e-10:  # pragma: no cover - reduction bug guard
        raise ArithmeticError(f"bias constant {c!r} disagrees with 1 - sx/sy = {1 - sx / sy!r}")
    return ReducedMoments(sigma2_x=sx, sigma2_y=sy, c=c)


def plim_k(p: StructuralParams, k) -> float:
    """Probability limit of the horizon-k estimator, ``theta * (1 - c)**(1/k)``."""
    k = _as_k(k)
    c = bias_constant(p).c
    return p.theta * (1.0 - c) ** (1.0 / k)


def asy_variance_factor(theta: float, k) -> float:
    """Approximate ``T * var`` of the horizon-k estimator: ``(1 / (k theta^k))**2``."""
    k = _as_k(k)
    if not 0.0 < theta < 1.0:
        raise ParameterError(f"theta must lie in (0, 1), got {theta!r}")
    return (1.0 / (k * theta ** k)) ** 2


def variance_growth_threshold(theta: float) -> float:
    """Horizon ``-1/ln(theta)`` beyond which :func:`asy_variance_factor` increases in k."""
    if not 0.0 < theta < 1.0:
        raise ParameterError(f"theta must lie in (0, 1), got {theta!r}")
    return -1.0 / math.log(theta)
