"""Catch-all estimation from squared k-step forecast residuals.

For a zero-mean series the k-step forecast equation is
``y_{s+k} = theta**k * y_s + e``, and the catch-all objective is

    Q(theta) = sum_k w_k * sum_{s=1}^{T-k} (y_{s+k} - theta**k * y_s)**2

Both sums for a horizon run over the same pairs ``(y_s, y_{s+k})``,
``s = 1..T-k``, so for a single horizon the closed form
``(sum y_s y_{s+k} / sum y_s**2) ** (1/k)`` is the exact minimiser.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import kernels
from .errors import (DegenerateSeriesError, HorizonTooLargeError, NonPositiveRatioError,
                     ParameterError, SearchDomainError)
from .model import HorizonSpec, StructuralParams, _as_k, autocov_y
from .search import grid_then_golden
from .simulate import SeriesPath

__all__ = [
    "WeightScheme",
    "SearchOptions",
    "Method",
    "EstimateResult",
    "HorizonMoments",
    "horizon_moments",
    "kstep_residuals",
    "objective",
    "estimate_closed_form",
    "estimate_catchall",
    "profile_objective",
    "pseudo_true",
]


@dataclass(frozen=True)
class WeightScheme:
    """Nonnegative weights over forecast horizons. Not normalised."""

    weights: Mapping[int, float]

    def __post_init__(self):
        items = []
        for k, w in dict(self.weights).items():
            k = HorizonSpec(k).k
            w = float(w)
            if not np.isfinite(w) or w < 0.0:
                raise ParameterError(f"weight for k={k} must be finite and >= 0, got {w!r}")
            items.append((k, w))
        if not any(w > 0.0 for _, w in items):
            raise ParameterError("weight scheme needs at least one positive weight")
        object.__setattr__(self, "weights", dict(sorted(items)))

    @classmethod
    def point_mass(cls, k) -> "WeightScheme":
        return cls({_as_k(k): 1.0})

    @classmethod
    def equal(cls, ks) -> "WeightScheme":
        return cls({int(k): 1.0 for k in ks})

    @classmethod
    def parse(cls, text: str) -> "WeightScheme":
        """Parse ``"k1:w1,k2:w2"``."""
        out = {}
        try:
            for part in text.split(","):
                k, w = part.split(":")
                out[int(k)] = float(w)
        except ValueError:
            raise ParameterError(f"cannot parse weights {text!r}; expected k1:w1,k2:w2") from None
        return cls(out)

    @property
    def active(self) -> dict[int, float]:
        return {k: w for k, w in self.weights.items() if w > 0.0}

    @property
    def max_k(self) -> int:
        return max(self.active)

    def is_point_mass(self) -> bool:
        return len(self.active) == 1

    def label(self) -> str:
        return ",".join(f"{k}:{w!r}" for k, w in self.weights.items())


@dataclass(frozen=True)
class SearchOptions:
    lo: float = 1e-4
    hi: float = 1.0 - 1e-4
    n_grid: int = 512
    tol: float = 1e-8

    def __post_init__(self):
        if not 0.0 < self.lo < self.hi < 1.0:
            raise SearchDomainError(f"search interval ({self.lo!r}, {self.hi!r}) must sit inside (0, 1)")


class Method(str, enum.Enum):
    CLOSED_FORM = "closed_form"
    MINIMIZER = "minimizer"


@dataclass(frozen=True)
class EstimateResult:
    theta_hat: float
    objective_value: float
    method: Method
    horizon: int | None = None
    weights: WeightScheme | None = None
    n_terms: dict[int, int] = field(default_factory=dict)
    outside_unit_interval: bool = False


@dataclass(frozen=True)
class HorizonMoments:
    """Per-horizon sufficient statistics of the objective."""

    ks: np.ndarray
    cross: np.ndarray   # sum y_s y_{s+k}
    head: np.ndarray    # sum y_s^2
    tail: np.ndarray    # sum y_{s+k}^2
    n_terms: np.ndarray


def _values(y) -> np.ndarray:
    v = y.values if isinstance(y, SeriesPath) else np.asarray(y, dtype=np.float64)
    return np.ascontiguousarray(v, dtype=np.float64)


def _check_horizon(n: int, k: int):
    if k > n - 2:
        raise HorizonTooLargeError(f"horizon k={k} exceeds T-2={n - 2}")


def horizon_moments(y, ks) -> HorizonMoments:
    v = _values(y)
    ks = np.ascontiguousarray([_as_k(k) for k in ks], dtype=np.int64)
    for k in ks:
        _check_horizon(v.shape[0], int(k))
    cross, head, tail = kernels.lagged_moments(v, ks)
    return HorizonMoments(ks, cross, head, tail, v.shape[0] - ks)


def kstep_residuals(y, theta: float, k) -> np.ndarray:
    """``y_{s+k} - theta**k * y_s`` for s = 1..T-k."""
    k = _as_k(k)
    v = _values(y)
    _check_horizon(v.shape[0], k)
    return v[k:] - theta ** k * v[:-k]


def _objective_from_moments(mom: HorizonMoments, w: np.ndarray, thetas) -> np.ndarray:
    t = np.atleast_1d(np.asarray(thetas, dtype=np.float64))
    pk = t[:, None] ** mom.ks[None, :]
    per_k = mom.tail[None, :] - 2.0 * pk * mom.cross[None, :] + pk * pk * mom.head[None, :]
    return per_k @ w


def objective(y, w: WeightScheme, thetas) -> np.ndarray:
    """Catch-all objective evaluated at each point of ``thetas``."""
    active = w.active
    mom = horizon_moments(y, list(active))
    return _objective_from_moments(mom, np.array(list(active.values())), thetas)


def estimate_closed_form(y, k) -> EstimateResult:
    """Explicit single-horizon estimator: k-th root of the lag-k / lag-0 moment ratio."""
    k = _as_k(k)
    mom = horizon_moments(y, [k])
    head, cross = mom.head[0], mom.cross[0]
    if head == 0.0:
        raise DegenerateSeriesError("sum of squares is zero; series carries no information")
    ratio = cross / head
    if not ratio > 0.0:
        raise NonPositiveRatioError(k, float(ratio))
    theta = float(ratio ** (1.0 / k))
    q = float(_objective_from_moments(mom, np.ones(1), theta)[0])
    return EstimateResult(
        theta_hat=theta,
        objective_value=q,
        method=Method.CLOSED_FORM,
        horizon=k,
        n_terms={k: int(mom.n_terms[0])},
        outside_unit_interval=not 0.0 < theta < 1.0,
    )


def estimate_catchall(y, w: WeightScheme, opts: SearchOptions | None = None) -> EstimateResult:
    """Minimise the weighted objective over ``(opts.lo, opts.hi)``.

    The objective is a polynomial in theta; a grid pre-scan picks the basin
    and golden-section search refines it to ``opts.tol``.
    """
    opts = opts or SearchOptions()
    active = w.active
    mom = horizon_moments(y, list(active))
    if np.any(mom.n_terms < 1):  # pragma: no cover - guarded by _check_horizon
        raise HorizonTooLargeError("a weighted horizon has no residual terms")
    wv = np.array(list(active.values()))
    res = grid_then_golden(lambda t: _objective_from_moments(mom, wv, t),
                           opts.lo, opts.hi, n_grid=opts.n_grid, tol=opts.tol)
    return EstimateResult(
        theta_hat=float(res.x),
        objective_value=float(res.fun),
        method=Method.MINIMIZER,
        horizon=next(iter(active)) if len(active) == 1 else None,
        weights=w,
        n_terms={int(k): int(n) for k, n in zip(mom.ks, mom.n_terms)},
    )


def profile_objective(y, w: WeightScheme, thetas) -> np.ndarray:
    """Objective on a grid as an ``(n, 2)`` array of ``(theta, Q(theta))`` rows."""
    t = np.atleast_1d(np.asarray(thetas, dtype=np.float64))
    if t.size == 0:
        raise ParameterError("profile grid is empty")
    if np.any((t <= 0.0) | (t >= 1.0)):
        raise ParameterError("profile grid must lie inside (0, 1)")
    return np.column_stack([t, objective(y, w, t)])


def pseudo_true(p: StructuralParams, w: WeightScheme, opts: SearchOptions | None = None) -> float:
    """Population minimiser of the weighted objective (the estimator's probability limit).

    Uses autocovariances in place of sample moments. For a point mass at k
    this reproduces :func:`catchall.model.plim_k`.
    """
    opts = opts or SearchOptions()
    active = w.active
    ks = np.array(list(active), dtype=np.int64)
    g0 = autocov_y(p, 0)
    mom = HorizonMoments(ks, np.array([autocov_y(p, int(k)) for k in ks]),
                         np.full(ks.shape, g0), np.full(ks.shape, g0), np.zeros_like(ks))
    wv = np.array(list(active.values()))
    res = grid_then_golden(lambda t: _objective_from_moments(mom, wv, t),
                           opts.lo, opts.hi, n_grid=opts.n_grid, tol=opts.tol)
    return float(res.x)
