"""Longest edge meeting a window under a polynomial connection tail.

Simulates the continuous model at growing window sizes, rescales the
longest edge by the Frechet norming c_n = (2^{d-1} C n^d)^{1/(alpha-d)},
and compares the empirical law against Phi_{alpha-d}(r) = exp(-r^{d-alpha}).
Also prints the certified Poisson-approximation bound next to the observed
total-variation distance of the exceedance count (the empirical tv
estimate carries O(sqrt(1/M)) sampling bias on top of the true distance).

Run: python3 demos/frechet_limit.py
"""

import math

import numpy as np

from longedge import (
    ConnectionFunction,
    EmpiricalDistribution,
    Family,
    NormKind,
    SeedSpec,
    dkw_epsilon,
    frechet_schedule,
    ks_distance,
    poisson_bounds,
    sample_continuous,
    tv_to_poisson,
)

ALPHA, D, RHO, M = 3.0, 1, 1.0, 2000


def main() -> None:
    g = ConnectionFunction(Family.F, alpha=ALPHA)
    sched = frechet_schedule(D, ALPHA, RHO, "continuous")
    print(f"alpha={ALPHA} d={D} rho={RHO}  limit law: Frechet({ALPHA - D})")
    # KS is measured against the limit law, so it carries the finite-n
    # deviation on top of sampling noise and decreases towards the DKW
    # noise floor as n grows
    print(f"{'n':>5} {'c_n':>9} {'limit KS':>8} {'DKW(1%)':>8} {'tv(W)':>8} {'bound':>8}")
    for n in (50, 200, 800):
        c_n = sched.c_fn(n)
        t = c_n  # threshold at normalized level r = 1
        es, ws = [], []
        for i in range(M):
            rec = sample_continuous(
                g, RHO, D, NormKind.ONE, float(n), 3.0 * c_n,
                SeedSpec(2024, i, f"demo-n{n}"), threshold=t)
            es.append((rec.e_star or 0.0) / c_n)
            ws.append(rec.w_count)
        emp = EmpiricalDistribution.from_samples(np.array(es))
        ks = ks_distance(
            emp,
            lambda r: math.exp(-r ** (D - ALPHA)) if r > 0 else 0.0)
        rep = poisson_bounds(g, RHO, D, n, t)
        tv = tv_to_poisson(np.array(ws), rep.beta_n)
        print(f"{n:>5} {c_n:9.3f} {ks:8.4f} {dkw_epsilon(M, 0.01):8.4f}"
              f" {tv:8.4f} {rep.dtv_bound:8.4f}")


if __name__ == "__main__":
    main()
