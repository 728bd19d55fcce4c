"""Empirical-distribution machinery: ECDFs, Kolmogorov-Smirnov distances
against analytic CDFs, DKW confidence bands, plug-in total-variation
distance of integer samples against a Poisson law, and log-log rate fits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as sps


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Sorted sample with ECDF evaluation."""

    values: np.ndarray
    m: int

    @classmethod
    def from_samples(cls, samples) -> "EmpiricalDistribution":
        arr = np.sort(np.asarray(samples, dtype=float))
        if arr.size == 0:
            raise ValueError("need at least one sample")
        return cls(arr, arr.size)

    def cdf(self, x: float) -> float:
        return float(np.searchsorted(self.values, x, side="right")) / self.m

    def grid(self, points: int = 200) -> tuple[np.ndarray, np.ndarray]:
        """(x, ECDF(x)) on an evenly spaced grid over the sample range."""
        xs = np.linspace(self.values[0], self.values[-1], points)
        ys = np.searchsorted(self.values, xs, side="right") / self.m
        return xs, ys


def ks_distance(emp: EmpiricalDistribution, cdf, cdf_left=None) -> float:
    """sup over the sample points of max(|F_hat(x) - F(x)|, |F_hat(x-) - F(x-)|).

    Tie-aware: at repeated sample values the ECDF jumps by the tie
    multiplicity, so both one-sided gaps are taken at the distinct values.
    For a continuous target law F(x-) = F(x) and cdf_left can be omitted;
    for laws with atoms (the no-edge atom at 0, integer-valued lattice
    laws) pass the left limit explicitly, otherwise the jump itself is
    miscounted as discrepancy.
    """
    vals = emp.values
    F = np.array([cdf(float(x)) for x in vals])
    Fl = F if cdf_left is None else np.array([cdf_left(float(x)) for x in vals])
    hi = np.searchsorted(vals, vals, side="right") / emp.m  # F_hat(x)
    lo = np.searchsorted(vals, vals, side="left") / emp.m   # F_hat(x-)
    return float(np.max(np.maximum(np.abs(hi - F), np.abs(lo - Fl))))


def dkw_epsilon(m: int, delta: float) -> float:
    """Distribution-free ECDF band half-width sqrt(ln(2/delta) / (2m))."""
    if m < 1 or not 0.0 < delta < 1.0:
        raise ValueError("need m >= 1 and delta in (0, 1)")
    return math.sqrt(math.log(2.0 / delta) / (2.0 * m))


def tv_to_poisson(counts, mu: float) -> float:
    """Plug-in total-variation distance between an integer sample and
    Poisson(mu): (1/2) sum_k |p_hat_k - pmf(k)| plus half the Poisson mass
    beyond the histogram support."""
    if mu < 0:
        raise ValueError("mu must be >= 0")
    arr = np.asarray(counts, dtype=int)
    if arr.size == 0:
        raise ValueError("need at least one count")
    kmax = int(arr.max())
    hist = np.bincount(arr, minlength=kmax + 1) / arr.size
    ks = np.arange(kmax + 1)
    pmf = sps.poisson.pmf(ks, mu)
    tail = float(sps.poisson.sf(kmax, mu))
    return 0.5 * (float(np.sum(np.abs(hist - pmf))) + tail)


@dataclass(frozen=True)
class RateFit:
    slope: float
    stderr: float
    intercept: float


def fit_rate(points) -> RateFit:
    """Least-squares slope of log(value) vs log(n) over (n, value) pairs."""
    pts = [(float(n), float(v)) for n, v in points]
    if len(pts) < 3:
        raise ValueError("need at least 3 points")
    if any(v <= 0 or n <= 0 for n, v in pts):
        raise ValueError("rate fit requires positive n and values")
    x = np.log([n for n, _ in pts])
    y = np.log([v for _, v in pts])
    res = sps.linregress(x, y)
    return RateFit(float(res.slope), float(res.stderr), float(res.intercept))
