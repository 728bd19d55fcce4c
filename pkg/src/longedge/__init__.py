"""Longest-edge statistics for long-range percolation models.

Simulates discrete and continuous long-range percolation, computes exact
finite-window and limiting distributions of the longest edge meeting an
observation window, and cross-validates Monte Carlo samples against
closed-form laws, norming sequences, and Poisson-approximation bounds.
"""

from .geometry import (
    BudgetError,
    NormKind,
    Window,
    enumerate_window,
    in_quadrant,
    quadrant_shell_count,
    shell_count,
    surface_constant,
)
from .connection import (
    ConnectionFunction,
    Family,
    TailMass,
    tail_mass_continuum,
    tail_sum_lattice,
    tail_sum_lattice_offset,
)
from .norming import (
    LawKind,
    LimitLaw,
    NormingSchedule,
    erlang_quantile,
    frechet_constant,
    frechet_schedule,
    gumbel_g1_btilde,
    gumbel_g1_btilde_lambert,
    gumbel_g1_scale,
    gumbel_g1_schedule,
    gumbel_g2_btilde,
    gumbel_g2_schedule,
    lambert_w_minus1,
    root_calibrated_shift,
    weibull_constant,
    weibull_schedule,
)
from .analytic import (
    DichotomyReport,
    PoissonBoundReport,
    ZStarLaw,
    dichotomy_limit,
    directed_max_cdf,
    expected_exceedances,
    limit_cdf,
    poisson_bounds,
    typical_edge_cdf,
    undirected_cdf_d1,
    undirected_exponent_d1,
)
from .sampler import (
    ExceedanceRecord,
    GraphSample,
    SeedSpec,
    padding_for_certificate,
    run_replicates,
    sample_continuous,
    sample_directed,
    sample_discrete_coupled,
    sample_discrete_undirected,
    sample_typical_edge,
)
from .stats import (
    EmpiricalDistribution,
    RateFit,
    dkw_epsilon,
    fit_rate,
    ks_distance,
    tv_to_poisson,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
