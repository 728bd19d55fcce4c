import math

import numpy as np
import pytest
from scipy import special

from longedge.connection import ConnectionFunction, Family
from longedge.norming import (
    LawKind,
    erlang_quantile,
    frechet_constant,
    frechet_schedule,
    gumbel_g1_btilde,
    gumbel_g1_btilde_lambert,
    gumbel_g1_schedule,
    gumbel_g2_btilde,
    gumbel_g2_schedule,
    lambert_w_minus1,
    root_calibrated_shift,
    weibull_constant,
    weibull_schedule,
)
from longedge.analytic import expected_exceedances


def test_frechet_constant_reference_point():
    # d=1, alpha=3, rho=1: both continuous and discrete reduce to K=1
    assert frechet_constant(1, 3.0, 1.0, "continuous") == pytest.approx(1.0, rel=1e-12)
    assert frechet_constant(1, 3.0, 1.0, "discrete") == pytest.approx(1.0, rel=1e-12)


def test_frechet_constant_rho_scaling():
    # continuous K carries rho^2 inside C, so K scales like rho^{2/(alpha-d)}
    k1 = frechet_constant(1, 3.0, 1.0, "continuous")
    k2 = frechet_constant(1, 3.0, 2.0, "continuous")
    assert k2 / k1 == pytest.approx(2.0 ** (2.0 / 2.0), rel=1e-12)
    # discrete K has no rho dependence
    assert frechet_constant(1, 3.0, 5.0, "discrete") == frechet_constant(1, 3.0, 1.0, "discrete")


def test_frechet_constant_directed_models():
    # dLRP d=1 alpha=2: per-source two-sided tail ~ 2/t over a window of
    # 2n sources at scale c_n = C n forces C = 4
    assert frechet_constant(1, 2.0, 1.0, "dLRP") == pytest.approx(4.0, rel=1e-12)
    # dLRPq restricts targets to the positive quadrant: half the mass
    assert frechet_constant(1, 2.0, 1.0, "dLRPq") == pytest.approx(2.0, rel=1e-12)


def test_frechet_schedule_calibration():
    # the schedule is chosen so that the owned exceedance mean at the
    # norming scale converges to r^{d-alpha}: check at large n, r=K
    g = ConnectionFunction(Family.F, alpha=3.0)
    sch = frechet_schedule(1, 3.0, 1.0, "continuous")
    assert sch.law.kind is LawKind.FRECHET
    n = 4000
    t = sch.c_fn(n) * 1.0  # r = 1 at K = 1
    mean = expected_exceedances("continuous", g, 1.0, 1, n, t)
    assert mean == pytest.approx(1.0, rel=0.02)


def test_weibull_constant_reference_point():
    assert weibull_constant(1, 1.0, 1.0, 1.0) == pytest.approx(1.0, rel=1e-12)
    # M scaling: C ~ M^{d-1-alpha} = M^{-1} here, K = C^{1/(alpha+1)} pre-shift
    k_m = weibull_schedule(1, 1.0, 1.0, 2.0)
    assert k_m.law.kind is LawKind.WEIBULL


def test_erlang_quantile_inverts_gamma_sf():
    q = erlang_quantile(1.0, 2, 0.9)
    assert q == pytest.approx(3.889720169867429, rel=1e-12)
    assert special.gammaincc(2, q) == pytest.approx(0.1, rel=1e-10)


def test_lambert_w_branch():
    u = -0.1
    w = lambert_w_minus1(u)
    assert w == pytest.approx(-3.577152063957297, rel=1e-12)
    assert w * math.exp(w) == pytest.approx(u, rel=1e-10)
    assert w <= -1.0


def test_gumbel_g1_btilde_solves_tail_equation():
    # btilde_n solves n^d * P(Erlang_d > lam * b) = 1
    for d, n in [(1, 50), (2, 40), (3, 12)]:
        b = gumbel_g1_btilde(d, 1.0, n)
        assert special.gammaincc(d, b) * n**d == pytest.approx(1.0, rel=1e-10)


def test_gumbel_g1_lambert_route_matches_direct():
    for n in (10, 100, 1000):
        direct = gumbel_g1_btilde(2, 1.0, n)
        via_w = gumbel_g1_btilde_lambert(1.0, n)
        assert via_w == pytest.approx(direct, rel=1e-10)


def test_gumbel_g2_btilde_growth():
    # btilde lives on the alpha-power scale, growing like d*ln(n)/lam
    bs = [gumbel_g2_btilde(1, 2.0, 1.0, n) for n in (100, 10000)]
    assert bs[1] > bs[0]
    assert bs[1] / math.log(10000.0) == pytest.approx(
        bs[0] / math.log(100.0), rel=0.2)


def test_gumbel_schedules_shapes():
    s1 = gumbel_g1_schedule(1, 1.0, "dLRPq")
    assert s1.law.kind is LawKind.GUMBEL
    assert s1.power == 1.0
    s2 = gumbel_g2_schedule(1, 2.0, 1.0, "continuous", 1.0)
    assert s2.law.kind is LawKind.GUMBEL
    assert s2.power == pytest.approx(2.0)
    c, b = gumbel_g2_schedule(1, 2.0, 1.0, "continuous", 1.0, n=200)
    assert c == pytest.approx(1.0)
    assert math.isfinite(b) and b > 0.0


def test_root_calibrated_shift_hits_unit_mean_continuous():
    g = ConnectionFunction(Family.G1, lam=1.0)
    d, n = 1, 60
    btilde = gumbel_g1_btilde(d, 1.0, n)
    shift = root_calibrated_shift("continuous", g, 1.0, d, n, btilde, 1.0)
    b_n = btilde + shift
    mean = expected_exceedances("continuous", g, 1.0, d, n, b_n)
    assert mean == pytest.approx(1.0, abs=1e-8)


def test_root_calibrated_shift_lattice_brackets_jump():
    # lattice exceedance means are step functions of the threshold, so the
    # solver returns the jump location: mean >= 1 just below, <= 1 above
    g = ConnectionFunction(Family.G1, lam=1.0)
    d, n = 1, 60
    btilde = gumbel_g1_btilde(d, 1.0, n)
    shift = root_calibrated_shift("dLRPq", g, 1.0, d, n, btilde, 1.0)
    b_n = btilde + shift
    lo = expected_exceedances("dLRPq", g, 1.0, d, n, b_n - 1e-6)
    hi = expected_exceedances("dLRPq", g, 1.0, d, n, b_n + 1e-6)
    assert lo >= 1.0 - 1e-9
    assert hi <= 1.0 + 1e-9
