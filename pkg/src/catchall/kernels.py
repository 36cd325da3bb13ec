"""Hot inner loops, each in a numba-compiled and a numpy flavour.

The ``*_jit`` functions are loops compiled by numba, the ``*_np`` functions
are vectorised numpy/scipy equivalents. The unsuffixed public names are
bound to one or the other according to :data:`catchall._accel.USE_NUMBA`.
Both flavours agree to floating-point rounding; within one backend every
kernel is deterministic.
"""
import numpy as np
from scipy.signal import lfilter

from ._accel import USE_NUMBA, njit

__all__ = [
    "ar1_recursion",
    "arma11_recursion",
    "lagged_moments",
    "daniell_extended",
    "dft_power_direct",
]


# --- AR(1): x_t = theta * x_{t-1} + eps_t -----------------------------------

@njit
def ar1_recursion_jit(x0, theta, eps):
    out = np.empty(eps.shape[0])
    prev = x0
    for t in range(eps.shape[0]):
        prev = theta * prev + eps[t]
        out[t] = prev
    return out


def ar1_recursion_np(x0, theta, eps):
    eps = np.asarray(eps, dtype=np.float64)
    if eps.size == 0:
        return np.empty(0)
    out, _ = lfilter([1.0], [1.0, -theta], eps, zi=[theta * x0])
    return out


# --- ARMA(1,1): y_t = theta * y_{t-1} + u_t - alpha * u_{t-1} ----------------

@njit
def arma11_recursion_jit(y0, u0, theta, alpha, u):
    out = np.empty(u.shape[0])
    prev_y = y0
    prev_u = u0
    for t in range(u.shape[0]):
        prev_y = theta * prev_y + u[t] - alpha * prev_u
        prev_u = u[t]
        out[t] = prev_y
    return out


def arma11_recursion_np(y0, u0, theta, alpha, u):
    u = np.asarray(u, dtype=np.float64)
    if u.size == 0:
        return np.empty(0)
    out, _ = lfilter([1.0, -alpha], [1.0, -theta], u, zi=[theta * y0 - alpha * u0])
    return out


# --- lagged second moments -------------------------------------------------

@njit
def lagged_moments_jit(y, ks):
    """For each horizon k return (sum y_s y_{s+k}, sum y_s^2, sum y_{s+k}^2), s < T-k."""
    n = y.shape[0]
    cross = np.zeros(ks.shape[0])
    head = np.zeros(ks.shape[0])
    tail = np.zeros(ks.shape[0])
    for i in range(ks.shape[0]):
        k = ks[i]
        c = 0.0
        h = 0.0
        tl = 0.0
        for s in range(n - k):
            a = y[s]
            b = y[s + k]
            c += a * b
            h += a * a
            tl += b * b
        cross[i] = c
        head[i] = h
        tail[i] = tl
    return cross, head, tail


def lagged_moments_np(y, ks):
    y = np.asarray(y, dtype=np.float64)
    ks = np.asarray(ks, dtype=np.int64)
    n = y.shape[0]
    cross = np.empty(ks.shape[0])
    head = np.empty(ks.shape[0])
    tail = np.empty(ks.shape[0])
    for i, k in enumerate(ks):
        a = y[: n - k]
        b = y[k:]
        cross[i] = a @ b
        head[i] = a @ a
        tail[i] = b @ b
    return cross, head, tail


# --- Daniell moving average over an already-extended sequence --------------

@njit
def daniell_extended_jit(ext, m):
    """Flat average over windows of 2m+1 of ``ext``; output has len(ext) - 2m points."""
    width = 2 * m + 1
    n_out = ext.shape[0] - 2 * m
    out = np.empty(n_out)
    for j in range(n_out):
        acc = 0.0
        for i in range(width):
            acc += ext[j + i]
        out[j] = acc / width
    return out


def daniell_extended_np(ext, m):
    ext = np.asarray(ext, dtype=np.float64)
    window = np.ones(2 * m + 1) / (2 * m + 1)
    return np.convolve(ext, window, mode="valid")


# --- direct (O(T*J)) periodogram ordinates ----------------------------------

@njit
def dft_power_direct_jit(y, freqs):
    """|sum_{t=1}^T y_t exp(-i t lam)|^2 / T at each frequency."""
    n = y.shape[0]
    out = np.empty(freqs.shape[0])
    for j in range(freqs.shape[0]):
        lam = freqs[j]
        re = 0.0
        im = 0.0
        for t in range(n):
            ang = lam * (t + 1)
            re += y[t] * np.cos(ang)
            im -= y[t] * np.sin(ang)
        out[j] = (re * re + im * im) / n
    return out


def dft_power_direct_np(y, freqs, block=256):
    y = np.asarray(y, dtype=np.float64)
    freqs = np.asarray(freqs, dtype=np.float64)
    t = np.arange(1, y.shape[0] + 1, dtype=np.float64)
    out = np.empty(freqs.shape[0])
    for start in range(0, freqs.shape[0], block):
        ang = np.outer(freqs[start:start + block], t)
        re = np.cos(ang) @ y
        im = np.sin(ang) @ y
        out[start:start + block] = (re * re + im * im) / y.shape[0]
    return out


if USE_NUMBA:
    ar1_recursion = ar1_recursion_jit
    arma11_recursion = arma11_recursion_jit
    lagged_moments = lagged_moments_jit
    daniell_extended = daniell_extended_jit
    dft_power_direct = dft_power_direct_jit
else:
    ar1_recursion = ar1_recursion_np
    arma11_recursion = arma11_recursion_np
    lagged_moments = lagged_moments_np
    daniell_extended = daniell_extended_np
    dft_power_direct = dft_power_direct_np
