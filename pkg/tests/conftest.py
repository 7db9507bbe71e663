"""Shared test oracles, deliberately independent of the library code paths
they check: exact rational binomial tails, a scalar-loop Chebyshev distance,
and a plain Kolmogorov-Smirnov statistic."""

from fractions import Fraction
from typing import List

import numpy as np

from exprgg import PointCloud


def binomial_pmf_exact(n: int, p: float) -> List[Fraction]:
    """Exact Bin(n, p) pmf over k = 0..n, with p taken as its exact binary value."""
    pf = Fraction(p)
    qf = 1 - pf
    pmf = [qf**n]
    for k in range(1, n + 1):
        pmf.append(pmf[-1] * (n - k + 1) * pf / (k * qf))
    return pmf


def binomial_lower_tail_exact(n: int, p: float, k: int) -> Fraction:
    """P[Bin(n, p) <= k], exact."""
    return sum(binomial_pmf_exact(n, p)[: k + 1], Fraction(0))


def binomial_upper_tail_exact(n: int, p: float, k: int) -> Fraction:
    """P[Bin(n, p) >= k], exact."""
    return sum(binomial_pmf_exact(n, p)[k:], Fraction(0))


def scalar_linf(p, q) -> float:
    """Chebyshev distance by an explicit per-axis loop."""
    best = 0.0
    for a, b in zip(p, q):
        diff = a - b if a >= b else b - a
        if diff > best:
            best = diff
    return best


def scalar_edges(points: np.ndarray, y: float) -> set:
    """Edge set by doubly-nested scalar loops, no numpy reductions."""
    n = len(points)
    out = set()
    for i in range(n):
        for j in range(i + 1, n):
            if scalar_linf(points[i], points[j]) <= y:
                out.add((i, j))
    return out


def ks_statistic_exponential(samples: np.ndarray, lam: float) -> float:
    """Two-sided KS distance between the empirical CDF and the Exp(lam) CDF."""
    xs = np.sort(np.asarray(samples, dtype=np.float64))
    n = len(xs)
    cdf = 1.0 - np.exp(-lam * xs)
    upper = np.max(np.abs(cdf - np.arange(1, n + 1) / n))
    lower = np.max(np.abs(cdf - np.arange(0, n) / n))
    return float(max(upper, lower))


def make_cloud(points, lam: float = 1.0, seed: int = 0) -> PointCloud:
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    return PointCloud(d=pts.shape[1], points=pts, seed=seed, lam=lam)
