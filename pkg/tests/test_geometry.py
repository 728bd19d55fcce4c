import itertools

import numpy as np
import pytest

from longedge.geometry import (
    BudgetError,
    NormKind,
    enumerate_window,
    in_quadrant,
    quadrant_shell_count,
    shell_count,
    surface_constant,
)


def brute_shell(d, k):
    return sum(
        1 for z in itertools.product(range(-k, k + 1), repeat=d)
        if sum(abs(c) for c in z) == k
    )


def brute_quadrant_shell(d, k):
    return sum(
        1 for z in itertools.product(range(-k, k + 1), repeat=d)
        if sum(abs(c) for c in z) == k and in_quadrant(z)
    )


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("k", [1, 2, 3, 7, 12])
def test_shell_counts_match_enumeration(d, k):
    assert shell_count(d, k) == brute_shell(d, k)
    assert quadrant_shell_count(d, k) == brute_quadrant_shell(d, k)


def test_shell_count_known_values():
    # d=1: two points at distance k; d=2: 4k points (diamond ring)
    assert [shell_count(1, k) for k in (1, 5, 30)] == [2, 2, 2]
    assert [shell_count(2, k) for k in (1, 2, 3)] == [4, 8, 12]
    # quadrant d=2: lattice points with z1 >= 0, z2 >= 1 summing to k
    assert [quadrant_shell_count(2, k) for k in (1, 2, 3)] == [1, 2, 3]
    assert quadrant_shell_count(1, 17) == 1


def test_quadrant_membership():
    assert in_quadrant((0, 1))
    assert in_quadrant((3, 2))
    assert not in_quadrant((-1, 2))
    assert not in_quadrant((2, 0))
    assert in_quadrant((1,))
    assert not in_quadrant((0,))


def test_full_shell_is_sum_of_quadrant_type_counts():
    # each full shell decomposes into 2^d signed copies of nonneg shells;
    # spot-check the leading-order ratio: N_d(k)/k^{d-1} -> 2^d/(d-1)!
    for d in (2, 3, 4):
        k = 400
        kappa = surface_constant(NormKind.ONE, d)
        assert shell_count(d, k) / k ** (d - 1) == pytest.approx(kappa, rel=0.02)


def test_surface_constants():
    assert surface_constant(NormKind.ONE, 1) == 2.0
    assert surface_constant(NormKind.ONE, 2) == 4.0
    assert surface_constant(NormKind.SUP, 2) == 8.0
    assert surface_constant(NormKind.TWO, 2) == pytest.approx(2 * np.pi)


def test_enumerate_window():
    pts = list(enumerate_window(2, 1))
    assert len(pts) == 9
    assert (0, 0) in pts and (-1, 1) in pts
    with pytest.raises(BudgetError):
        list(enumerate_window(4, 50, max_points=1000))
