import math

import numpy as np
import pytest
from scipy import integrate

from longedge.connection import (
    ConnectionFunction,
    Family,
    tail_mass_continuum,
    tail_sum_lattice,
    tail_sum_lattice_offset,
)
from longedge.geometry import NormKind, shell_count, quadrant_shell_count


F3 = ConnectionFunction(Family.F, alpha=3.0)
F2 = ConnectionFunction(Family.F, alpha=2.0)
G1 = ConnectionFunction(Family.G1, lam=1.0)
G2 = ConnectionFunction(Family.G2, alpha=2.0, lam=1.0)
W1 = ConnectionFunction(Family.W, alpha=1.0, M=1.0)


def test_family_validation():
    with pytest.raises(ValueError):
        ConnectionFunction(Family.F, alpha=0.5).require_integrable(1)
    with pytest.raises(ValueError):
        ConnectionFunction(Family.G2, alpha=-1.0, lam=1.0)
    with pytest.raises(ValueError):
        ConnectionFunction(Family.W, alpha=1.0, M=-2.0)


def test_eval_ranges_and_weights():
    s = np.array([0.25, 1.0, 3.0, 10.0])
    for g in (F3, G1, G2, W1):
        vals = np.asarray(g.eval(s))
        assert np.all((0.0 <= vals) & (vals <= 1.0))
        assert np.all(np.diff(vals) <= 1e-15)  # nonincreasing in distance
    # weight w = -ln(1 - g): exact closed forms for F and G1
    assert np.allclose(F3.weight(s), s**-3.0)
    assert np.allclose(G1.weight(s), np.exp(-s))
    # W support ends at M
    assert W1.eval(np.array([1.5]))[0] == 0.0


@pytest.mark.parametrize("g,d", [(F3, 1), (F3, 2), (G1, 1), (G1, 2), (G2, 1), (G2, 3), (W1, 1), (W1, 2)])
def test_tail_mass_matches_quadrature(g, d):
    # independent oracle: d-dimensional integral reduced to the radial form
    # integral_{|y|_1 > r} g = kappa * integral_r^inf s^{d-1} g(s) ds
    from longedge.geometry import surface_constant

    kappa = surface_constant(NormKind.ONE, d)
    for r in (0.0, 0.4, 2.5):
        ref, err = integrate.quad(
            lambda s: kappa * s ** (d - 1) * float(np.asarray(g.eval(np.array([s])))[0]),
            r, np.inf if g.family is not Family.W else g.M, limit=400)
        if g.family is Family.W and r >= g.M:
            ref = 0.0
        tm = tail_mass_continuum(g, d, NormKind.ONE, r)
        assert tm.value == pytest.approx(ref, abs=max(1e-10, 4 * err))
        assert tm.truncation_error >= 0.0


def test_tail_mass_full_value_f_family():
    # closed form at r=0 for the polynomial family, d=1, alpha=3:
    # 2 * integral_0^inf (1 - exp(-s^-3)) ds = 2 Gamma(2/3)
    tm = tail_mass_continuum(F3, 1, NormKind.ONE, 0.0)
    assert tm.value == pytest.approx(2.0 * math.gamma(2.0 / 3.0), rel=1e-12)


def brute_tail_sum(g, d, r, domain, cutoff=40000):
    count = shell_count if domain == "full" else quadrant_shell_count
    ks = np.arange(max(math.floor(r) + 1, 1), cutoff + 1)
    counts = np.array([count(d, int(k)) for k in ks], dtype=float)
    return float(np.sum(counts * np.asarray(g.weight(ks.astype(float)))))


def test_tail_sum_lattice_known_values():
    # full sum at r=0, alpha=2, d=1: 2 * zeta(2) = pi^2 / 3
    ts = tail_sum_lattice(F2, 1, 0.0, "full")
    assert ts.value == pytest.approx(math.pi**2 / 3.0, abs=1e-12)
    # quadrant tail beyond r=10: hurwitz zeta(2, 11)
    ts = tail_sum_lattice(F2, 1, 10.0, "quadrant")
    assert ts.value == pytest.approx(0.09516633568168575, abs=1e-12)


@pytest.mark.parametrize("g,d,domain", [
    (F2, 1, "full"), (F3, 2, "full"), (F3, 2, "quadrant"),
    (G1, 1, "full"), (G1, 2, "full"), (G1, 3, "quadrant"),
    (G2, 1, "full"), (G2, 2, "quadrant"), (G2, 3, "quadrant"),
])
def test_tail_sum_certificates_bracket_brute_force(g, d, domain):
    for r in (0.0, 3.5):
        ts = tail_sum_lattice(g, d, r, domain)
        brute = brute_tail_sum(g, d, r, domain, cutoff=3000)
        # brute is a lower bound (finite cutoff); the certified interval
        # must contain the cutoff value up to the cutoff's own remainder
        assert brute <= ts.value + ts.truncation_error + 1e-12
        rest = tail_sum_lattice(g, d, 3000.0, domain)
        assert ts.value - ts.truncation_error <= brute + rest.value + rest.truncation_error + 1e-12


def test_tail_sum_w_family_exact():
    gw = ConnectionFunction(Family.W, alpha=1.0, M=2.5)
    ts = tail_sum_lattice(gw, 1, 0.0, "full")
    w = lambda k: -math.log1p(-(2.5 - k) / 2.5)
    assert ts.value == pytest.approx(2 * (w(1.0) + w(2.0)), rel=1e-12)
    assert ts.truncation_error == 0.0


def test_tail_sum_offset_matches_brute():
    g = F2
    n, x = 3, (2,)
    for r in (0.0, 4.0):
        off = tail_sum_lattice_offset(g, 1, n, x, r)
        cut = 20000
        ys = [y for y in range(-cut, cut + 1) if abs(y - x[0]) > max(r, 0) and not (-n <= y <= n)]
        brute = sum(abs(y - x[0]) ** -2.0 for y in ys)
        # brute misses the tail beyond the cutoff, about 2/cut
        assert off.value == pytest.approx(brute, abs=3.0 / cut)


def test_tail_sum_decreasing_in_r():
    vals = [tail_sum_lattice(F3, 2, r, "full").value for r in (0.0, 1.0, 5.0, 25.0)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
