"""The four connection-function families, exact per-edge weights
-ln(1 - g), and certified tail masses / lattice tail sums over the
exterior of balls.

Every analytic quantity that involves an infinite series or integral
carries a certified truncation bound (TailMass.truncation_error), so
downstream acceptance checks can consume honest error bars.  Lattice
tails are summed over one-norm shells (O(K) terms instead of O(K^d))
and the remainder is certified with the monotone integral sandwich
    int_{K+1}^inf f  <=  sum_{k>K} f(k)  <=  int_K^inf f,
applied monomial-by-monomial to the exact shell-count polynomial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import integrate, special

from .geometry import BudgetError, NormKind, enumerate_window, surface_constant

_EULER_GAMMA = 0.5772156649015328606


class Family(Enum):
    F = "F"    # polynomial decay: 1 - exp(-s^-alpha)
    G1 = "G1"  # double-exponential: 1 - exp(-exp(-lambda s))
    G2 = "G2"  # stretched exponential: exp(-lambda s^alpha)
    W = "W"    # bounded support: M^-alpha (M - s)^alpha on [0, M]


@dataclass(frozen=True)
class ConnectionFunction:
    """One of the four parametric families, evaluated by distance."""

    family: Family
    alpha: float | None = None
    lam: float | None = None
    M: float | None = None

    def __post_init__(self) -> None:
        fam = self.family
        if fam is Family.F:
            if self.alpha is None or self.alpha <= 0:
                raise ValueError("family F needs alpha > 0")
        elif fam is Family.G1:
            if self.lam is None or self.lam <= 0:
                raise ValueError("family G1 needs lambda > 0")
        elif fam is Family.G2:
            if self.lam is None or self.lam <= 0 or self.alpha is None or self.alpha <= 0:
                raise ValueError("family G2 needs lambda > 0 and alpha > 0")
        elif fam is Family.W:
            if self.M is None or self.M <= 0 or self.alpha is None or self.alpha <= 0:
                raise ValueError("family W needs M > 0 and alpha > 0")

    def eval(self, s):
        """Edge probability at distance s >= 0 (scalar or ndarray)."""
        s = np.asarray(s, dtype=float)
        fam = self.family
        if fam is Family.F:
            with np.errstate(divide="ignore"):
                out = -np.expm1(-np.power(s, -self.alpha))
            out = np.where(s == 0.0, 1.0, out)
        elif fam is Family.G1:
            out = -np.expm1(-np.exp(-self.lam * s))
        elif fam is Family.G2:
            out = np.exp(-self.lam * np.power(s, self.alpha))
        else:
            base = np.clip(self.M - s, 0.0, None)
            out = (base / self.M) ** self.alpha
        return out if out.ndim else float(out)

    def weight(self, s):
        """Exact per-edge weight -ln(1 - g(s)).

        Simplified exact forms for F (s^-alpha) and G1 (exp(-lambda s));
        log1p-stable evaluation for G2 and W.  Infinite at s where g = 1.
        """
        s = np.asarray(s, dtype=float)
        fam = self.family
        if fam is Family.F:
            with np.errstate(divide="ignore"):
                out = np.power(s, -self.alpha)
        elif fam is Family.G1:
            out = np.exp(-self.lam * s)
        elif fam is Family.G2:
            with np.errstate(divide="ignore"):
                out = -np.log1p(-np.exp(-self.lam * np.power(s, self.alpha)))
            out = np.where(s == 0.0, np.inf, out)
        else:
            g = np.clip(self.M - s, 0.0, None) / self.M
            with np.errstate(divide="ignore"):
                out = -np.log1p(-(g**self.alpha))
        return out if out.ndim else float(out)

    def require_integrable(self, d: int) -> None:
        """Family F only integrates over R^d when alpha > d."""
        if self.family is Family.F and self.alpha <= d:
            raise ValueError(
                f"family F with alpha={self.alpha} <= d={d}: tail mass diverges"
            )


@dataclass(frozen=True)
class TailMass:
    """A nonnegative tail quantity plus a certified truncation bound.

    The true value lies in [value - truncation_error, value + truncation_error].
    """

    value: float
    truncation_error: float
    method: str

    def __post_init__(self) -> None:
        if self.value < 0 or self.truncation_error < 0:
            raise ValueError("tail mass and certificate must be nonnegative")

    @property
    def upper(self) -> float:
        return self.value + self.truncation_error


# ---------------------------------------------------------------------------
# continuum tail masses:  integral over {||z|| > r} of g(z) dz
# ---------------------------------------------------------------------------


def _gauss_f_radial_tail(alpha: float, d: int, r: float) -> float:
    """integral_r^inf s^{d-1} (1 - e^{-s^-alpha}) ds, exactly.

    Substituting u = s^-alpha and integrating by parts gives
    (1/(alpha c)) * [Gamma(1-c) P(1-c, X) - (1 - e^-X) X^-c]
    with c = d/alpha and X = r^-alpha.
    """
    c = d / alpha
    if r <= 0.0:
        return math.gamma(1.0 - c) / d
    x = r ** (-alpha)
    reg = special.gammainc(1.0 - c, x)  # regularized lower incomplete gamma
    return (math.gamma(1.0 - c) * reg - (-math.expm1(-x)) * x ** (-c)) / (alpha * c)


def _g1_radial_tail(lam: float, d: int, r: float) -> tuple[float, float]:
    """integral_r^inf s^{d-1} (1 - e^{-e^{-lam s}}) ds, with an error bound.

    d = 1 is closed form via the entire exponential integral Ein;
    d >= 2 uses adaptive quadrature after u = exp(-lam s), which maps the
    infinite tail to a finite interval.
    """
    x = math.exp(-lam * r)
    if d == 1:
        ein = special.exp1(x) + _EULER_GAMMA + math.log(x) if x > 0 else 0.0
        return ein / lam, 0.0

    def integrand(u):
        phi = -np.expm1(-u) / u if u > 0 else 1.0
        return (math.log(1.0 / u) / lam) ** (d - 1) * phi / lam

    val, err = integrate.quad(integrand, 0.0, x, epsabs=1e-13, epsrel=1e-12, limit=200)
    return val, err


def tail_mass_continuum(
    g: ConnectionFunction, d: int, norm: NormKind, r: float, tol: float = 1e-10
) -> TailMass:
    """Certified integral of g over {||z|| > r} in R^d.

    Closed forms for all four families (F via incomplete gamma after the
    substitution u = s^-alpha, G2 via the upper incomplete gamma, W via the
    incomplete beta); only G1 in d >= 2 needs quadrature, on a finite
    interval, and its quadrature error is reported.
    """
    if r < 0:
        raise ValueError("r must be >= 0")
    g.require_integrable(d)
    kappa = surface_constant(norm, d)
    fam = g.family

    if fam is Family.W:
        if r >= g.M:
            return TailMass(0.0, 0.0, "closed_form")
        u0 = r / g.M
        b = special.beta(d, g.alpha + 1.0)
        val = kappa * g.M**d * b * (1.0 - special.betainc(d, g.alpha + 1.0, u0))
        return TailMass(val, 0.0, "closed_form")

    if fam is Family.G2:
        c = d / g.alpha
        val = (
            kappa
            / g.alpha
            * g.lam ** (-c)
            * math.gamma(c)
            * special.gammaincc(c, g.lam * r**g.alpha)
        )
        return TailMass(val, 0.0, "closed_form")

    if fam is Family.F:
        return TailMass(kappa * _gauss_f_radial_tail(g.alpha, d, r), 0.0, "closed_form")

    val, err = _g1_radial_tail(g.lam, d, r)
    return TailMass(kappa * val, kappa * err, "closed_form" if d == 1 else "quadrature")


# ---------------------------------------------------------------------------
# lattice tail sums over one-norm shells
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _count_poly(d: int, domain: str) -> tuple[float, ...]:
    """Exact polynomial coefficients (ascending) of the shell count in k.

    Valid at every integer k >= 1 for both the full lattice N_d(k) and the
    quadrant q_d(k).
    """

    def poly_mul(a, b):
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return out

    def binom_poly(shift: int, m: int):
        # C(k + shift, m) as a polynomial in k
        p = [Fraction(1)]
        for t in range(m):
            p = poly_mul(p, [Fraction(shift - t), Fraction(1)])
        return [c / math.factorial(m) for c in p]

    if domain == "quadrant":
        coeffs = binom_poly(d - 2, d - 1)
    else:
        coeffs = [Fraction(0)] * d
        for i in range(1, d + 1):
            term = binom_poly(-1, i - 1)
            scale = Fraction(2**i * math.comb(d, i))
            for j, c in enumerate(term):
                coeffs[j] += scale * c
    return tuple(float(c) for c in coeffs)


def _monomial_tail(g: ConnectionFunction, j: int, a: float) -> float:
    """integral_a^inf s^j w_env(s) ds for the weight envelope of the family.

    Envelope: exact weight for F (s^-alpha) and G1 (e^-lam s); for G2 the
    envelope is e^{-lam s^alpha} (a lower bound on the weight, see
    _g2_envelope_factor for the matching upper bound).
    """
    fam = g.family
    if fam is Family.F:
        p = g.alpha - j - 1.0
        if p <= 0:
            raise ValueError("divergent lattice tail: need alpha > d")
        return a ** (-p) / p
    if fam is Family.G1:
        lam = g.lam
        return math.factorial(j) / lam ** (j + 1) * special.gammaincc(j + 1, lam * a)
    if fam is Family.G2:
        lam, al = g.lam, g.alpha
        c = (j + 1.0) / al
        return math.gamma(c) / (al * lam**c) * special.gammaincc(c, lam * a**al)
    raise AssertionError("W family has finite support; no envelope tail")


def _g2_envelope_factor(g: ConnectionFunction, a: float) -> float:
    """Upper bound on weight(s) / e^{-lam s^alpha} for s >= a."""
    x = math.exp(-g.lam * a**g.alpha)
    if x >= 1.0:
        return math.inf
    if x == 0.0:
        return 1.0
    return -math.log1p(-x) / x


def _monotone_from(g: ConnectionFunction, j: int) -> float:
    """s beyond which s^j * w_env(s) is nonincreasing."""
    fam = g.family
    if fam is Family.F:
        return 0.0
    if fam is Family.G1:
        return j / g.lam
    return (j / (g.lam * g.alpha)) ** (1.0 / g.alpha) if j > 0 else 0.0


def _remainder_bounds(g: ConnectionFunction, d: int, domain: str, K: int) -> tuple[float, float]:
    """Certified [lower, upper] bounds on sum_{k > K} count(k) * weight(k)."""
    coeffs = _count_poly(d, domain)
    up_factor = _g2_envelope_factor(g, K) if g.family is Family.G2 else 1.0
    lo = hi = 0.0
    for j, c in enumerate(coeffs):
        if c == 0.0:
            continue
        t_hi = _monomial_tail(g, j, K)
        t_lo = _monomial_tail(g, j, K + 1)
        if c > 0:
            hi += c * t_hi * up_factor
            lo += c * t_lo
        else:
            hi += c * t_lo
            lo += c * t_hi * up_factor
    return max(lo, 0.0), max(hi, 0.0)


def _shell_counts_float(d: int, domain: str, ks: np.ndarray) -> np.ndarray:
    coeffs = _count_poly(d, domain)
    out = np.full_like(ks, coeffs[-1], dtype=float)
    for j in range(len(coeffs) - 2, -1, -1):
        out = out * ks + coeffs[j]
    return out


def tail_sum_lattice(
    g: ConnectionFunction,
    d: int,
    r: float,
    domain: str = "full",
    tol: float = 1e-10,
    max_terms: int = 50_000_000,
) -> TailMass:
    """Certified sum of count(k) * weight(k) over shells k > r.

    count = N_d for the full lattice, q_d for the quadrant.  The partial
    sum is extended (doubling K) until the integral-sandwich remainder
    half-width is <= tol; the midpoint of the remainder bracket is added
    to the value and the half-width reported as the certificate.
    """
    if domain not in ("full", "quadrant"):
        raise ValueError(f"unknown domain {domain!r}")
    if g.family is Family.F:
        g.require_integrable(d)
    kmin = math.floor(r) + 1

    if g.family is Family.W:
        kmax = math.ceil(g.M) - 1
        if kmax < kmin:
            return TailMass(0.0, 0.0, "shell_sum")
        ks = np.arange(kmin, kmax + 1, dtype=float)
        val = float(np.sum(_shell_counts_float(d, domain, ks) * g.weight(ks)))
        return TailMass(val, 0.0, "shell_sum")

    k_mono = max(
        int(math.ceil(max(_monotone_from(g, j) for j in range(d)))) + 1, kmin
    )
    K = max(k_mono, kmin + 63)
    partial = 0.0
    start = kmin
    while True:
        ks = np.arange(start, K + 1, dtype=float)
        if ks.size:
            partial += float(np.sum(_shell_counts_float(d, domain, ks) * g.weight(ks)))
        lo, hi = _remainder_bounds(g, d, domain, K)
        half = (hi - lo) / 2.0
        if half <= tol:
            return TailMass(partial + (hi + lo) / 2.0, half, "shell_sum")
        if 2 * K - kmin > max_terms:
            raise BudgetError(
                f"lattice tail sum: tolerance {tol} unreachable within "
                f"{max_terms} terms; best certificate {half:.3e}"
            )
        start = K + 1
        K *= 2


def tail_sum_lattice_offset(
    g: ConnectionFunction,
    d: int,
    n: int,
    x: tuple[int, ...],
    r: float,
    tol: float = 1e-10,
) -> TailMass:
    """sum over y outside B_n with ||y - x||_1 > r of weight(||y - x||_1).

    Full-lattice tail minus the finite in-window part, enumerated exactly.
    """
    if len(x) != d or any(abs(c) > n for c in x):
        raise ValueError("x must be a lattice point of the window")
    full = tail_sum_lattice(g, d, r, "full", tol=tol)
    if d == 1:
        p = x[0]
        dist_caps = (n - p, n + p)  # in-window distances run 1..cap on each side
        sub = 0.0
        kmin = math.floor(r) + 1
        for cap in dist_caps:
            if cap >= kmin:
                ks = np.arange(kmin, cap + 1, dtype=float)
                sub += float(np.sum(g.weight(ks)))
    else:
        sub = 0.0
        for y in enumerate_window(d, n):
            dist = sum(abs(a - b) for a, b in zip(y, x))
            if dist > r and dist > 0:
                sub += float(g.weight(float(dist)))
    val = full.value - sub
    return TailMass(max(val, 0.0), full.truncation_error, "shell_sum")
