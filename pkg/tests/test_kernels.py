import os
import subprocess
import sys

import numpy as np
import pytest

from catchall import kernels
from catchall._accel import ENV_FLAG, HAVE_NUMBA

pytestmark = pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")

rng = np.random.default_rng(12345)
EPS = rng.standard_normal(3000)
Y = rng.standard_normal(1024).cumsum() * 0.1


def test_ar1_agree():
    a = kernels.ar1_recursion_jit(0.7, 0.9, EPS)
    b = kernels.ar1_recursion_np(0.7, 0.9, EPS)
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12)
    assert a[0] == 0.9 * 0.7 + EPS[0]


def test_arma_agree():
    a = kernels.arma11_recursion_jit(0.3, -0.2, 0.9, 0.36, EPS)
    b = kernels.arma11_recursion_np(0.3, -0.2, 0.9, 0.36, EPS)
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12)
    assert a[0] == pytest.approx(0.9 * 0.3 + EPS[0] + 0.36 * 0.2, abs=1e-15)


def test_lagged_moments_agree():
    ks = np.array([1, 2, 7, 30], dtype=np.int64)
    for got, want in zip(kernels.lagged_moments_jit(Y, ks), kernels.lagged_moments_np(Y, ks)):
        np.testing.assert_allclose(got, want, rtol=1e-12)
    cross, head, tail = kernels.lagged_moments_np(Y, ks)
    assert cross[2] == pytest.approx(np.sum(Y[:-7] * Y[7:]), rel=1e-12)
    assert head[2] == pytest.approx(np.sum(Y[:-7] ** 2), rel=1e-12)
    assert tail[2] == pytest.approx(np.sum(Y[7:] ** 2), rel=1e-12)


def test_daniell_agree():
    ext = np.abs(EPS[:500])
    a = kernels.daniell_extended_jit(ext, 5)
    b = kernels.daniell_extended_np(ext, 5)
    np.testing.assert_allclose(a, b, rtol=1e-12)
    assert a.shape == (490,)
    assert a[0] == pytest.approx(ext[:11].mean(), rel=1e-13)


def test_dft_agree():
    lam = 2 * np.pi * np.arange(1, 65) / 128
    y = Y[:128]
    a = kernels.dft_power_direct_jit(y, lam)
    b = kernels.dft_power_direct_np(y, lam)
    np.testing.assert_allclose(a, b, rtol=1e-10)


def test_env_flag_selects_numpy():
    code = ("import catchall, catchall.kernels as k; "
            "print(catchall.BACKEND, k.ar1_recursion is k.ar1_recursion_np)")
    env = dict(os.environ, **{ENV_FLAG: "1"})
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "True"]
    env[ENV_FLAG] = "0"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numba", "False"]
