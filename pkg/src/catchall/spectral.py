"""Spectra of the latent and observed series and interval bounds on the latent spectrum.

Convention: ``f(lam) = sum_h gamma_h * exp(-i h lam)`` on ``[0, pi]`` with no
``1/(2 pi)`` factor, so white noise of variance ``s2`` has flat density
``s2`` and the observed spectrum is the latent one shifted up by the noise
variance. Under this convention ``E[I(lam_j)] ~ f(lam_j)`` for the
periodogram ``I(lam) = |sum_t y_t exp(-i t lam)|**2 / T``.

Because the noise only shifts the level, the observed spectrum bounds the
latent one from above, and subtracting its minimum bounds it from below.
Extremum *locations* are unaffected by the unknown shift.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ParameterError, SeriesTooShortError
from .model import StructuralParams
from .simulate import SeriesPath

__all__ = [
    "CurveKind",
    "SpectralCurve",
    "SpectralBounds",
    "SpectralFeatures",
    "DEFAULT_GRID_SIZE",
    "frequency_grid",
    "fourier_frequencies",
    "spectrum_ar1",
    "spectrum_y",
    "periodogram",
    "periodogram_direct",
    "periodogram_energy",
    "default_half_width",
    "smooth",
    "identification_bounds",
    "noise_variance_bound",
    "find_features",
]

DEFAULT_GRID_SIZE = 4096


class CurveKind(str, enum.Enum):
    THEORETICAL_X = "theoretical_x"
    THEORETICAL_Y = "theoretical_y"
    PERIODOGRAM = "periodogram"
    SMOOTHED = "smoothed"
    LOWER_BOUND = "lower_bound"
    UPPER_BOUND = "upper_bound"


@dataclass(frozen=True, eq=False)
class SpectralCurve:
    """Density values on an increasing grid of angular frequencies in ``[0, pi]``.

    ``n_obs`` is the series length for curves on Fourier frequencies
    ``2 pi j / T``; it is ``None`` for theoretical curves.
    """

    freqs: np.ndarray
    values: np.ndarray
    kind: CurveKind
    n_obs: int | None = None

    def __post_init__(self):
        f = np.array(self.freqs, dtype=np.float64).ravel()
        v = np.array(self.values, dtype=np.float64).ravel()
        if f.shape != v.shape:
            raise ParameterError("freqs and values differ in length")
        if f.size == 0:
            raise ParameterError("empty spectral curve")
        if np.any(np.diff(f) <= 0.0) or f[0] < 0.0 or f[-1] > math.pi:
            raise ParameterError("frequencies must be strictly increasing within [0, pi]")
        if not np.all(np.isfinite(v)) or np.any(v < 0.0):
            raise ParameterError("spectral values must be finite and >= 0")
        f.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "freqs", f)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "kind", CurveKind(self.kind))

    def __len__(self):
        return self.values.shape[0]


@dataclass(frozen=True)
class SpectralBounds:
    lower: SpectralCurve
    upper: SpectralCurve
    f_bar: float

    @property
    def width(self) -> np.ndarray:
        return self.upper.values - self.lower.values


@dataclass(frozen=True)
class SpectralFeatures:
    """Local extrema as ``(index, frequency, value)`` triples, in grid order."""

    peaks: tuple
    troughs: tuple

    @property
    def peak_indices(self) -> list[int]:
        return [p[0] for p in self.peaks]

    @property
    def trough_indices(self) -> list[int]:
        return [p[0] for p in self.troughs]

    def global_peak(self):
        """Highest peak; the lowest-frequency one on ties. ``None`` when there is none."""
        if not self.peaks:
            return None
        return max(self.peaks, key=lambda p: (p[2], -p[0]))


def frequency_grid(n: int = DEFAULT_GRID_SIZE) -> np.ndarray:
    if n < 2:
        raise ParameterError("frequency grid needs at least 2 points")
    return np.linspace(0.0, math.pi, n)


def fourier_frequencies(n_obs: int) -> np.ndarray:
    """``2 pi j / T`` for ``j = 1..floor(T/2)``."""
    lam = 2.0 * math.pi * np.arange(1, n_obs // 2 + 1) / n_obs
    return np.minimum(lam, math.pi)  # 2 pi (T/2) / T can round above pi


def spectrum_ar1(p: StructuralParams, grid=None) -> SpectralCurve:
    lam = frequency_grid() if grid is None else np.asarray(grid, dtype=np.float64)
    vals = p.sigma2_eps / (1.0 - 2.0 * p.theta * np.cos(lam) + p.theta * p.theta)
    return SpectralCurve(lam, vals, CurveKind.THEORETICAL_X)


def spectrum_y(p: StructuralParams, grid=None) -> SpectralCurve:
    fx = spectrum_ar1(p, grid)
    return SpectralCurve(fx.freqs, fx.values + p.sigma2_eta, CurveKind.THEORETICAL_Y)


def _centered(y) -> np.ndarray:
    v = y.values if isinstance(y, SeriesPath) else np.asarray(y, dtype=np.float64)
    if v.shape[0] < 8:
        raise SeriesTooShortError(f"periodogram needs T >= 8, got {v.shape[0]}")
    return np.ascontiguousarray(v - v.mean())


def periodogram(y) -> SpectralCurve:
    """Periodogram of the mean-centred series at Fourier frequencies ``j = 1..floor(T/2)``.

    Computed with an FFT; :func:`periodogram_direct` evaluates the defining sum.
    """
    v = _centered(y)
    n = v.shape[0]
    spec = np.fft.rfft(v)[1: n // 2 + 1]
    vals = (spec.real ** 2 + spec.imag ** 2) / n
    return SpectralCurve(fourier_frequencies(n), vals, CurveKind.PERIODOGRAM, n_obs=n)


def periodogram_direct(y) -> SpectralCurve:
    v = _centered(y)
    n = v.shape[0]
    lam = fourier_frequencies(n)
    vals = kernels.dft_power_direct(v, np.ascontiguousarray(lam))
    return SpectralCurve(lam, vals, CurveKind.PERIODOGRAM, n_obs=n)


def periodogram_energy(pg: SpectralCurve) -> float:
    """Mean of the periodogram over all ``T`` Fourier frequencies ``j = 0..T-1``.

    By Parseval this equals the (divide-by-T) variance of the series. The
    ordinate at ``j = 0`` is zero after centring and ``I(2pi - lam) = I(lam)``
    supplies the frequencies above pi.
    """
    if pg.kind is not CurveKind.PERIODOGRAM or pg.n_obs is None:
        raise ParameterError("periodogram_energy needs a periodogram")
    n = pg.n_obs
    v = pg.values
    total = 2.0 * v.sum()
    if n % 2 == 0:
        total -= v[-1]  # the ordinate at pi has no mirror partner
    return total / n


def default_half_width(n_obs: int) -> int:
    return max(1, int(math.isqrt(n_obs) // 2))


def _reflect_index(n_obs: int, m: int) -> np.ndarray:
    """0-based ordinate index for positions ``1-m .. J+m`` around ``1..J``.

    Uses the periodogram's own symmetries ``I(-lam) = I(lam)`` and
    ``I(2pi - lam) = I(lam)``, skipping the zero-frequency ordinate.
    """
    big_j = n_obs // 2
    pos = np.arange(1 - m, big_j + m + 1)
    pos = np.where(pos < 1, 1 - pos, pos)
    pos = np.where(pos > big_j, n_obs - pos, pos)
    return pos - 1


def smooth(pg: SpectralCurve, half_width: int | None = None) -> SpectralCurve:
    """Daniell (flat, ``2m+1`` ordinates) smoother with reflection at both ends."""
    if pg.kind is not CurveKind.PERIODOGRAM or pg.n_obs is None:
        raise ParameterError("smooth expects a periodogram curve")
    n = pg.n_obs
    m = default_half_width(n) if half_width is None else half_width
    if int(m) != m or not 1 <= m <= n // 4:
        raise ParameterError(f"half width must be an integer in [1, {n // 4}], got {m!r}")
    m = int(m)
    ext = np.ascontiguousarray(pg.values[_reflect_index(n, m)])
    vals = kernels.daniell_extended(ext, m)
    return SpectralCurve(pg.freqs, vals, CurveKind.SMOOTHED, n_obs=n)


def identification_bounds(fy: SpectralCurve) -> SpectralBounds:
    """``fy - min(fy) <= f_x <= fy`` pointwise; the interval width is ``min(fy)`` everywhere."""
    if fy.kind in (CurveKind.LOWER_BOUND, CurveKind.UPPER_BOUND):
        raise ParameterError("bounds must be built from an observed-spectrum curve")
    f_bar = float(fy.values.min())
    lower = SpectralCurve(fy.freqs, fy.values - f_bar, CurveKind.LOWER_BOUND, fy.n_obs)
    upper = SpectralCurve(fy.freqs, fy.values, CurveKind.UPPER_BOUND, fy.n_obs)
    return SpectralBounds(lower=lower, upper=upper, f_bar=f_bar)


def noise_variance_bound(b: SpectralBounds) -> float:
    """Upper bound on the measurement-noise variance: the interval width ``f_bar``."""
    return b.f_bar


def find_features(f: SpectralCurve) -> SpectralFeatures:
    """Discrete local maxima and minima.

    Runs of equal values are collapsed first; a run is a peak (trough) if it
    is strictly above (below) each neighbouring run, with only one neighbour
    at the ends of the grid. The reported index is the run's leftmost point.
    A constant curve has no extrema.
    """
    v = f.values
    if v.shape[0] < 3:
        raise ParameterError("find_features needs at least 3 grid points")
    starts = np.flatnonzero(np.concatenate([[True], v[1:] != v[:-1]]))
    rv = v[starts]
    n = rv.shape[0]
    peaks, troughs = [], []
    if n == 1:
        return SpectralFeatures((), ())
    left_up = np.concatenate([[True], rv[1:] > rv[:-1]])      # above left neighbour
    right_up = np.concatenate([rv[:-1] > rv[1:], [True]])     # above right neighbour
    left_dn = np.concatenate([[True], rv[1:] < rv[:-1]])
    right_dn = np.concatenate([rv[:-1] < rv[1:], [True]])
    for r in np.flatnonzero(left_up & right_up):
        i = int(starts[r])
        peaks.append((i, float(f.freqs[i]), float(v[i])))
    for r in np.flatnonzero(left_dn & right_dn):
        i = int(starts[r])
        troughs.append((i, float(f.freqs[i]), float(v[i])))
    return SpectralFeatures(tuple(peaks), tuple(troughs))
