"""Bounded scalar minimisation: coarse grid pre-scan followed by golden-section refinement."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SearchDomainError

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SearchResult:
    x: float
    fun: float
    iterations: int


def golden_section(f, lo: float, hi: float, tol: float = 1e-8, max_iter: int = 500) -> SearchResult:
    """Minimise a unimodal ``f`` on ``[lo, hi]`` until the bracket is narrower than ``tol``."""
    if not lo < hi:
        raise SearchDomainError(f"empty search interval [{lo!r}, {hi!r}]")
    a, b = lo, hi
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    it = 0
    while b - a > tol and it < max_iter:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = f(x2)
        it += 1
    x = 0.5 * (a + b)
    fx = f(x)
    # the bracket can collapse onto an endpoint of the original interval
    for cand in (lo, hi):
        fc = f(cand)
        if fc < fx:
            x, fx = cand, fc
    return SearchResult(x=x, fun=fx, iterations=it)


def grid_then_golden(f_vec, lo: float, hi: float, n_grid: int = 512, tol: float = 1e-8) -> SearchResult:
    """Global-ish minimiser for a cheap objective.

    ``f_vec`` must accept a 1-d array of points and return their values.
    The best grid point and its two neighbours bracket the golden-section stage.
    """
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise SearchDomainError(f"empty search interval [{lo!r}, {hi!r}]")
    if n_grid < 3:
        raise SearchDomainError("pre-scan grid needs at least 3 points")
    grid = np.linspace(lo, hi, n_grid)
    vals = np.asarray(f_vec(grid), dtype=np.float64)
    i = int(np.argmin(vals))
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, n_grid - 1)]

    def f(x):
        return float(f_vec(np.array([x]))[0])

    res = golden_section(f, a, b, tol=tol)
    if vals[i] < res.fun:
        return SearchResult(x=float(grid[i]), fun=float(vals[i]), iterations=res.iterations)
    return res
