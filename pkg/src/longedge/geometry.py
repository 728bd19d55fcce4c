"""Lattice and continuum geometry: one-norm shells, observation windows,
the quadrant cone, and radial surface constants.

Shell counts are exact integers (Python's arbitrary precision makes silent
wraparound impossible), so they can safely feed certified series bounds.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum


class NormKind(Enum):
    ONE = "one_norm"
    TWO = "two_norm"
    SUP = "sup_norm"


class BudgetError(RuntimeError):
    """An enumeration or series would exceed its resource budget."""


def _check_dim(d: int) -> None:
    if not isinstance(d, int) or d < 1:
        raise ValueError(f"dimension must be a positive integer, got {d!r}")


def shell_count(d: int, k: int) -> int:
    """Number of points of Z^d at exact 1-norm distance k from the origin.

    N_d(0) = 1 and, for k >= 1,
    N_d(k) = sum_i 2^i C(d, i) C(k-1, i-1), choosing the i coordinates
    that are nonzero, their signs, and a composition of k into i parts.
    """
    _check_dim(d)
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return 1
    total = 0
    for i in range(1, min(d, k) + 1):
        total += (1 << i) * math.comb(d, i) * math.comb(k - 1, i - 1)
    return total


def quadrant_shell_count(d: int, k: int) -> int:
    """Number of quadrant points at exact 1-norm distance k.

    The quadrant is {z : z_1, ..., z_{d-1} >= 0, z_d >= 1}; counting
    solutions of z_1 + ... + z_d = k with z_d >= 1 gives a stars-and-bars
    binomial C(k - 1 + d - 1, d - 1).
    """
    _check_dim(d)
    if k < 1:
        raise ValueError("k must be >= 1")
    return math.comb(k + d - 2, d - 1)


def in_quadrant(z: tuple[int, ...]) -> bool:
    """Membership test for the quadrant cone Q(d)."""
    return all(c >= 0 for c in z[:-1]) and z[-1] >= 1


def surface_constant(norm: NormKind, d: int) -> float:
    """Constant kappa with  integral_{||x|| > r} f(||x||) dx
    = kappa * integral_r^inf s^{d-1} f(s) ds  for radial integrands f.

    kappa = d * vol(unit ball of the norm).
    """
    _check_dim(d)
    if norm is NormKind.ONE:
        return d * 2.0**d / math.factorial(d)
    if norm is NormKind.SUP:
        return d * 2.0**d
    if norm is NormKind.TWO:
        return d * math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)
    raise ValueError(f"unknown norm {norm!r}")


@dataclass(frozen=True)
class Window:
    """Observation window B_n = [-n, n]^d."""

    d: int
    n: int

    def __post_init__(self) -> None:
        _check_dim(self.d)
        if self.n < 0:
            raise ValueError("window radius must be nonnegative")

    @property
    def vertex_count(self) -> int:
        """Number of lattice points in the window, (2n+1)^d."""
        return (2 * self.n + 1) ** self.d

    @property
    def volume(self) -> float:
        """Lebesgue volume (2n)^d of the continuum window."""
        return float((2 * self.n) ** self.d)


def enumerate_window(d: int, n: int, max_points: int = 20_000_000):
    """Deterministic lexicographic enumeration of [-n, n]^d in Z^d.

    This fixed total order is THE enumeration used everywhere; the
    exact undirected CDF depends on it.
    """
    _check_dim(d)
    count = (2 * n + 1) ** d
    if count > max_points:
        raise BudgetError(
            f"window enumeration needs {count} points, budget is {max_points}"
        )
    return list(itertools.product(range(-n, n + 1), repeat=d))
