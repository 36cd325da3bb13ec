"""Compare the numba and numpy flavours of each kernel, and an end-to-end experiment.

    python benchmarks/bench_kernels.py [--repeat 20] [--skip-e2e]

Per-kernel timings are best-of-``repeat`` after one warm-up call (which
absorbs JIT compilation). The end-to-end section runs ``catchall mc bias``
in a fresh interpreter per backend, so it includes import and compile cost.
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from catchall import kernels
from catchall._accel import ENV_FLAG, HAVE_NUMBA


def best_of(fn, args, repeat):
    fn(*args)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def cases():
    rng = np.random.default_rng(0)
    eps = rng.standard_normal(5000)
    y = kernels.ar1_recursion_np(0.0, 0.9, eps) + rng.standard_normal(5000)
    ks = np.arange(1, 31, dtype=np.int64)
    ext = np.abs(rng.standard_normal(2048 + 64))
    lam = 2 * np.pi * np.arange(1, 513) / 1024
    return [
        ("ar1_recursion T=5000", "ar1_recursion", (0.1, 0.9, eps)),
        ("arma11_recursion T=5000", "arma11_recursion", (0.1, 0.2, 0.9, 0.36, eps)),
        ("lagged_moments T=5000 k=1..30", "lagged_moments", (y, ks)),
        ("daniell m=32 J=2048", "daniell_extended", (ext, 32)),
        ("dft_power_direct T=1024", "dft_power_direct", (y[:1024].copy(), lam)),
    ]


def end_to_end():
    cmd = [sys.executable, "-m", "catchall", "mc", "bias", "-T", "5000", "-R", "500",
           "--horizons", "1,2,5,10", "--out", os.devnull]
    out = {}
    for backend, flag in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, **{ENV_FLAG: flag})
        t0 = time.perf_counter()
        subprocess.run(cmd, env=env, check=True, capture_output=True)
        out[backend] = time.perf_counter() - t0
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--skip-e2e", action="store_true")
    args = ap.parse_args()
    if not HAVE_NUMBA:
        sys.exit("numba is not installed; nothing to compare")

    print(f"{'kernel':<32} {'numba [ms]':>11} {'numpy [ms]':>11} {'speedup':>8}")
    for label, name, a in cases():
        t_jit = best_of(getattr(kernels, name + "_jit"), a, args.repeat)
        t_np = best_of(getattr(kernels, name + "_np"), a, args.repeat)
        print(f"{label:<32} {1e3 * t_jit:>11.3f} {1e3 * t_np:>11.3f} {t_np / t_jit:>7.1f}x")

    if not args.skip_e2e:
        e2e = end_to_end()
        print(f"\nmc bias T=5000 R=500 (wall, incl. startup): "
              f"numba {e2e['numba']:.2f}s, numpy {e2e['numpy']:.2f}s")


if __name__ == "__main__":
    main()
