"""Batch experiment runner.

Subcommands: simulate | exact | norming | verify | sweep.  Configurations
are JSON files validated against ExperimentConfig (unknown keys rejected);
outputs are per-replicate CSV files plus JSON summaries that echo every
input needed to re-verify a row.  Exit codes: 0 success, 1 validation,
2 runtime/budget, 3 acceptance failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .geometry import BudgetError, NormKind, quadrant_shell_count, shell_count
from .connection import ConnectionFunction, Family
from .norming import (
    NormingSchedule,
    frechet_schedule,
    gumbel_g1_btilde,
    gumbel_g1_btilde_lambert,
    gumbel_g1_scale,
    gumbel_g1_schedule,
    gumbel_g2_schedule,
    weibull_schedule,
)
from .analytic import (
    dichotomy_limit,
    directed_max_cdf,
    expected_exceedances,
    limit_cdf,
    poisson_bounds,
    typical_edge_cdf,
    undirected_cdf_d1,
    undirected_cdf_d1_reference,
)
from .sampler import (
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
    dkw_epsilon,
    fit_rate,
    ks_distance,
    tv_to_poisson,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2
EXIT_ACCEPTANCE = 3

_MODELS = ("continuous", "discrete", "dLRP", "dLRPq")
_NORMS = {"one": NormKind.ONE, "two": NormKind.TWO, "sup": NormKind.SUP}
_SCHEDULES = ("frechet", "gumbel_g1", "gumbel_g2", "weibull")

# threshold constant for the critical d = 1, alpha = 2 lattice: the
# regime boundary sits at thresholds K n r with K = 2^d kappa/(alpha-d);
# such edges exceed the window diameter, so no single-owner halving applies
DICHOTOMY_K = 4.0


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    """Validated experiment description (mirrors the JSON config file)."""

    model: str = "continuous"
    family: str = "F"
    alpha: float | None = None
    lam: float | None = None
    M: float | None = None
    d: int = 1
    rho: float = 1.0
    norm: str = "one"
    n_grid: list = field(default_factory=lambda: [50])
    m: int = 100
    threshold: float | None = None
    r_grid: list = field(default_factory=list)
    schedule: str | None = None
    padding_R: float | None = None
    certificate_ceiling: float | None = None
    seed: int = 0
    workers: int = 1

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**raw)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.model not in _MODELS:
            raise ConfigError(f"model must be one of {_MODELS}")
        if self.norm not in _NORMS:
            raise ConfigError(f"norm must be one of {sorted(_NORMS)}")
        if self.model != "continuous" and self.norm != "one":
            raise ConfigError("lattice models use the one-norm")
        try:
            fam = Family[self.family]
        except KeyError:
            raise ConfigError(f"unknown family {self.family!r}") from None
        kwargs = {}
        if self.alpha is not None:
            kwargs["alpha"] = self.alpha
        if self.lam is not None:
            kwargs["lam"] = self.lam
        if self.M is not None:
            kwargs["M"] = self.M
        try:
            self._g = ConnectionFunction(fam, **kwargs)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
        if self.d < 1:
            raise ConfigError("d must be >= 1")
        if self.rho <= 0:
            raise ConfigError("rho must be > 0")
        if self.m < 1:
            raise ConfigError("m must be >= 1")
        if not self.n_grid or any(n < 0 for n in self.n_grid):
            raise ConfigError("n_grid must be nonempty with n >= 0")
        if self.schedule is not None and self.schedule not in _SCHEDULES:
            raise ConfigError(f"schedule must be one of {_SCHEDULES}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.padding_R is not None and self.padding_R <= 0:
            raise ConfigError("padding_R must be > 0")

    @property
    def g(self) -> ConnectionFunction:
        if not hasattr(self, "_g"):
            self.validate()
        return self._g

    @property
    def norm_kind(self) -> NormKind:
        return _NORMS[self.norm]


def load_config(path: str) -> ExperimentConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    return ExperimentConfig.from_dict(raw)


# ---------------------------------------------------------------------------
# replicate workers (module-level so ProcessPoolExecutor can pickle them)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _ContinuousJob:
    g: ConnectionFunction
    rho: float
    d: int
    norm: NormKind
    n: float
    padding: float
    threshold: float

    def __call__(self, seed: SeedSpec):
        return sample_continuous(
            self.g, self.rho, self.d, self.norm, self.n, self.padding, seed,
            threshold=self.threshold,
        )


@dataclass(frozen=True)
class _DirectedJob:
    g: ConnectionFunction
    d: int
    n: int
    variant: str
    threshold: float

    def __call__(self, seed: SeedSpec):
        return sample_directed(self.g, self.d, self.n, self.variant, seed,
                               threshold=self.threshold)


@dataclass(frozen=True)
class _UndirectedJob:
    g: ConnectionFunction
    d: int
    n: int
    threshold: float

    def __call__(self, seed: SeedSpec):
        return sample_discrete_undirected(self.g, self.d, self.n, self.threshold, seed)


def _job_for(cfg: ExperimentConfig, n: int, threshold: float):
    if cfg.model == "continuous":
        if cfg.padding_R is not None:
            R = cfg.padding_R
        else:
            ceiling = cfg.certificate_ceiling or 1e-4
            R = padding_for_certificate(cfg.g, cfg.rho, cfg.d, cfg.norm_kind, n, ceiling)
        return _ContinuousJob(cfg.g, cfg.rho, cfg.d, cfg.norm_kind, n, R, threshold)
    if cfg.model in ("dLRP", "dLRPq"):
        return _DirectedJob(cfg.g, cfg.d, n, cfg.model, threshold)
    return _UndirectedJob(cfg.g, cfg.d, n, threshold)


def _threshold_for(cfg: ExperimentConfig, n: int) -> float:
    if cfg.threshold is not None:
        return float(cfg.threshold)
    if cfg.schedule is not None:
        return _schedule_for(cfg).threshold(n, 1.0)
    return math.inf


def _schedule_for(cfg: ExperimentConfig) -> NormingSchedule:
    g = cfg.g
    if cfg.schedule == "frechet":
        return frechet_schedule(cfg.d, g.alpha, cfg.rho, cfg.model)
    if cfg.schedule == "gumbel_g1":
        return gumbel_g1_schedule(cfg.d, g.lam, cfg.model, cfg.rho)
    if cfg.schedule == "gumbel_g2":
        return gumbel_g2_schedule(cfg.d, g.alpha, g.lam, cfg.model, cfg.rho)
    if cfg.schedule == "weibull":
        return weibull_schedule(cfg.d, g.alpha, cfg.rho, g.M)
    raise ConfigError("no schedule configured")


# ---------------------------------------------------------------------------
# simulate / exact / norming / sweep
# ---------------------------------------------------------------------------


def _records_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["replicate", "e_star", "w_count", "threshold", "certificate"])
    for i, rec in enumerate(records):
        w.writerow([
            i,
            "" if rec.e_star is None else repr(float(rec.e_star)),
            int(rec.w_count),
            repr(float(rec.threshold_used)),
            repr(float(rec.truncation_certificate)),
        ])
    return buf.getvalue()


def simulate_csv(cfg: ExperimentConfig, n: int) -> str:
    """Per-replicate CSV text for one window size; deterministic in
    (config, seed) and independent of the worker count."""
    threshold = _threshold_for(cfg, n)
    job = _job_for(cfg, n, threshold)
    records = run_replicates(job, cfg.m, cfg.seed, workers=cfg.workers)
    return _records_csv(records)


def cmd_simulate(cfg: ExperimentConfig, out: Path) -> int:
    out.mkdir(parents=True, exist_ok=True)
    summary = {"config": {k: v for k, v in vars(cfg).items() if not k.startswith("_")},
               "runs": []}
    for n in cfg.n_grid:
        t0 = time.time()
        text = simulate_csv(cfg, int(n))
        path = out / f"simulate_{cfg.model}_n{n}.csv"
        path.write_text(text)
        rows = list(csv.DictReader(io.StringIO(text)))
        e = np.array([float(r["e_star"]) if r["e_star"] else 0.0 for r in rows])
        w = np.array([int(r["w_count"]) for r in rows])
        summary["runs"].append({
            "n": n,
            "csv": path.name,
            "e_star_ecdf_grid": np.sort(e).tolist(),
            "w_count_histogram": np.bincount(w).tolist(),
            "certificate": float(rows[0]["certificate"]) if rows else 0.0,
            "threshold": float(rows[0]["threshold"]) if rows else None,
            "runtime_s": round(time.time() - t0, 3),
        })
    (out / "simulate_summary.json").write_text(json.dumps(summary, indent=1))
    print(f"simulate: {len(cfg.n_grid)} run(s) written to {out}")
    return EXIT_OK


def cmd_exact(cfg: ExperimentConfig, out: Path) -> int:
    out.mkdir(parents=True, exist_ok=True)
    g = cfg.g
    rs = [float(r) for r in (cfg.r_grid or [0.5, 1.0, 2.0, 4.0])]
    rows = []
    if cfg.model == "continuous":
        for n in cfg.n_grid:
            for r in rs:
                pb = poisson_bounds(g, cfg.rho, cfg.d, int(n), r, cfg.norm_kind)
                rows.append({
                    "n": n, "r": r,
                    "typical_cdf": typical_edge_cdf(g, cfg.rho, cfg.d, cfg.norm_kind, r),
                    "beta_n": pb.beta_n, "dtv_bound": pb.dtv_bound,
                    "dw_bound": pb.dw_bound,
                    "tail_error": pb.tail_mass_used.truncation_error,
                })
    elif cfg.model in ("dLRP", "dLRPq"):
        for n in cfg.n_grid:
            for r in rs:
                rows.append({
                    "n": n, "r": r,
                    "cdf": directed_max_cdf(g, cfg.d, int(n), r, cfg.model),
                })
    else:
        for n in cfg.n_grid:
            for r in rs:
                row = {"n": n, "r": r, "cdf": undirected_cdf_d1(g, int(n), r)}
                rows.append(row)
        if g.family is Family.F and g.alpha == 2.0:
            for r in rs:
                rep = dichotomy_limit(r, DICHOTOMY_K)
                rows.append({
                    "n": "limit", "r": r, "mu": rep.mu,
                    "closed_form": 4.0 / (DICHOTOMY_K * r) if DICHOTOMY_K * r >= 2 else "",
                    "convergence_estimate": rep.convergence_estimate,
                })
    _write_table(out / f"exact_{cfg.model}.csv", rows)
    print(f"exact: {len(rows)} row(s) written to {out}")
    return EXIT_OK


def cmd_norming(cfg: ExperimentConfig, out: Path) -> int:
    out.mkdir(parents=True, exist_ok=True)
    if cfg.schedule is None:
        raise ConfigError("norming requires a schedule")
    g = cfg.g
    rows = []
    for n in cfg.n_grid:
        n = int(n)
        sched = _schedule_for(cfg)
        try:
            b_n = sched.b(n)
        except NotImplementedError:
            b_n = ""  # calibration not available for this model/dimension
        row = {"n": n, "c_n": sched.c(n), "b_n": b_n}
        if cfg.schedule == "gumbel_g1":
            bt = gumbel_g1_btilde(cfg.d, g.lam, n)
            row["btilde_n"] = bt
            row["shift"] = "" if b_n == "" else (b_n - bt) / row["c_n"]
            if cfg.d == 2:
                lw = gumbel_g1_btilde_lambert(g.lam, n)
                row["btilde_lambert"] = lw
                row["route_gap"] = abs(lw - bt)
        elif cfg.schedule == "gumbel_g2":
            from .norming import gumbel_g2_btilde
            bt = gumbel_g2_btilde(cfg.d, g.alpha, g.lam, n)
            row["btilde_n"] = bt
            row["K_n"] = "" if b_n == "" else (b_n - bt) / row["c_n"]
        rows.append(row)
    _write_table(out / f"norming_{cfg.schedule}.csv", rows)
    print(f"norming: {len(rows)} row(s) written to {out}")
    return EXIT_OK


def cmd_sweep(cfg: ExperimentConfig, out: Path) -> int:
    out.mkdir(parents=True, exist_ok=True)
    g = cfg.g
    sched = _schedule_for(cfg) if cfg.schedule else frechet_schedule(
        cfg.d, g.alpha, cfg.rho, cfg.model)
    r = float(cfg.r_grid[0]) if cfg.r_grid else 1.0
    pts = []
    for n in cfg.n_grid:
        n = int(n)
        pb = poisson_bounds(g, cfg.rho, cfg.d, n, sched.threshold(n, r), cfg.norm_kind)
        pts.append((n, pb.dtv_bound))
    fit = fit_rate(pts)
    rows = [{"n": n, "dtv_bound": v,
             "fitted": math.exp(fit.intercept) * n**fit.slope} for n, v in pts]
    _write_table(out / "sweep_dtv.csv", rows)
    (out / "sweep_fit.json").write_text(json.dumps(
        {"slope": fit.slope, "stderr": fit.stderr, "intercept": fit.intercept,
         "r": r, "model": cfg.model}, indent=1))
    print(f"sweep: slope {fit.slope:.4f} +/- {fit.stderr:.4f} written to {out}")
    return EXIT_OK


def _write_table(path: Path, rows: list[dict]) -> None:
    keys: list[str] = []
    for row in rows:
        for k in row:
            if k not in keys:
                keys.append(k)
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


# ---------------------------------------------------------------------------
# verification suites (the acceptance criteria, runnable one by one)
# ---------------------------------------------------------------------------


@dataclass
class SuiteResult:
    name: str
    passed: bool
    lines: list

    def report(self) -> str:
        head = f"[{'PASS' if self.passed else 'FAIL'}] {self.name}"
        return "\n".join([head] + [f"  {ln}" for ln in self.lines])


def _suite_geometry() -> SuiteResult:
    """Shell counts vs direct enumeration, d <= 4, k <= 30."""
    kmax = 30
    ok = True
    lines = []
    for d in range(1, 5):
        # enumerate the first d-1 coordinates; the last is +/-(k - rest)
        if d == 1:
            rest = np.zeros(1, dtype=int)
            qrest = rest
        else:
            axes = np.stack([a.ravel() for a in np.meshgrid(
                *([np.arange(-kmax, kmax + 1)] * (d - 1)), indexing="ij")])
            rest = np.abs(axes).sum(axis=0)
            qrest = rest[np.all(axes >= 0, axis=0)]
        for k in range(1, kmax + 1):
            brute = 2 * int(np.count_nonzero(rest < k)) + int(np.count_nonzero(rest == k))
            if brute != shell_count(d, k):
                ok = False
                lines.append(f"full shell mismatch d={d} k={k}: {brute} vs {shell_count(d, k)}")
            bruteq = int(np.count_nonzero(qrest <= k - 1))
            if bruteq != quadrant_shell_count(d, k):
                ok = False
                lines.append(
                    f"quadrant shell mismatch d={d} k={k}: {bruteq} vs {quadrant_shell_count(d, k)}")
    lines.append(f"shell counts d<=4, k<=30 vs enumeration: {'exact' if ok else 'MISMATCH'}")
    return SuiteResult("geometry", ok, lines)


_TYPICAL_POINTS = {
    "F": ConnectionFunction(Family.F, alpha=3.0),
    "G1": ConnectionFunction(Family.G1, lam=1.0),
    "G2": ConnectionFunction(Family.G2, alpha=2.0, lam=1.0),
    "W": ConnectionFunction(Family.W, alpha=1.0, M=1.0),
}


def _suite_typical_edge(m: int = 10_000) -> SuiteResult:
    band = dkw_epsilon(m, 0.01)
    ok = True
    lines = []
    for name, g in _TYPICAL_POINTS.items():
        vals = sample_typical_edge(g, 1.0, 1, NormKind.ONE, SeedSpec(20_001, 0, name), size=m)
        emp = EmpiricalDistribution.from_samples(vals)
        cdf = np.vectorize(lambda t: typical_edge_cdf(g, 1.0, 1, NormKind.ONE, float(t)))
        cdf_left = np.vectorize(
            lambda t: typical_edge_cdf(g, 1.0, 1, NormKind.ONE, float(t)) if t > 0 else 0.0)
        ks = ks_distance(emp, cdf, cdf_left=cdf_left)
        ok &= ks <= band
        lines.append(f"{name}: KS={ks:.4f} band={band:.4f} -> {'ok' if ks <= band else 'FAIL'}")
    return SuiteResult("typical-edge", ok, lines)


def _suite_frechet_continuous(m: int = 2000) -> SuiteResult:
    g = ConnectionFunction(Family.F, alpha=3.0)
    sched = frechet_schedule(1, 3.0, 1.0, "continuous")
    law = lambda r: limit_cdf(sched.law, r)
    slack = 3.0 * math.sqrt(math.log(2.0 / 0.01) / (2.0 * m))
    ok = True
    lines = []
    last_ks = math.inf
    for n in (50, 200, 800):
        R = padding_for_certificate(g, 1.0, 1, NormKind.ONE, n, 1e-4)
        cn = sched.c(n)
        job = _ContinuousJob(g, 1.0, 1, NormKind.ONE, n, R, cn)
        records = run_replicates(job, m, 30_000 + n)
        emp = EmpiricalDistribution.from_samples(
            np.array([(rec.e_star or 0.0) / cn for rec in records]))
        ks = ks_distance(emp, np.vectorize(law))
        pb = poisson_bounds(g, 1.0, 1, n, cn)
        tv = tv_to_poisson(np.array([rec.w_count for rec in records]), pb.beta_n)
        mono = ks < last_ks
        tv_ok = tv <= pb.dtv_bound + slack
        ok &= mono and tv_ok and (n != 800 or ks <= 0.05)
        lines.append(
            f"n={n}: KS={ks:.4f} (prev {last_ks if last_ks < math.inf else float('nan'):.4f}) "
            f"tv={tv:.4f} allowed={pb.dtv_bound + slack:.4f} cert<=1e-4 "
            f"-> {'ok' if mono and tv_ok else 'FAIL'}")
        last_ks = ks
    return SuiteResult("frechet-continuous", ok, lines)


def _suite_bound_rate() -> SuiteResult:
    g = ConnectionFunction(Family.F, alpha=3.0)
    sched = frechet_schedule(1, 3.0, 1.0, "continuous")
    pts = []
    for n in (10**2, 10**3, 10**4, 10**5):
        pb = poisson_bounds(g, 1.0, 1, n, sched.threshold(n, 1.0))
        pts.append((n, pb.dtv_bound))
    fit = fit_rate(pts)
    ok = abs(fit.slope - (-1.0)) <= 0.05
    return SuiteResult("bound-rate", ok, [
        f"dtv_bound slope over n=1e2..1e5 at r=1: {fit.slope:.4f} (target -1 +/- 0.05) "
        f"-> {'ok' if ok else 'FAIL'}"])


def _suite_directed_exact(m: int = 5000) -> SuiteResult:
    g = ConnectionFunction(Family.F, alpha=2.0)
    n = 100
    band = dkw_epsilon(m, 0.01)
    qs, ordered = [], 0
    for i in range(m):
        rec_q, und, rec_full = sample_discrete_coupled(g, n, math.inf, SeedSpec(50_005, i))
        eq = rec_q.e_star or 0.0
        eu = und.e_star or 0.0
        ef = rec_full.e_star or 0.0
        ordered += eq <= eu <= ef
        qs.append(eq)
    emp = EmpiricalDistribution.from_samples(np.array(qs))
    cdf = np.vectorize(lambda t: directed_max_cdf(g, 1, n, float(t), "dLRPq"))
    cdf_left = np.vectorize(
        lambda t: directed_max_cdf(g, 1, n, math.ceil(t) - 1.0, "dLRPq") if t > 0 else 0.0)
    ks = ks_distance(emp, cdf, cdf_left=cdf_left)
    ok = ks <= band and ordered == m
    return SuiteResult("directed-exact", ok, [
        f"dLRPq ECDF vs exact CDF: KS={ks:.4f} band={band:.4f}",
        f"coupled ordering e*(dLRPq) <= e* <= e*(dLRP): {ordered}/{m}",
    ])


def _suite_dichotomy() -> SuiteResult:
    rep4 = dichotomy_limit(4.0, DICHOTOMY_K)
    fin4 = rep4.exponents[-1]
    ok4 = abs(fin4 - 0.25) <= 0.01 * 0.25
    rep1 = dichotomy_limit(1.0, 1.0)
    margin = rep1.mu - 1.0
    cauchy = rep1.convergence_estimate <= 0.01 * abs(rep1.mu)
    ok1 = margin >= 0.5 and cauchy
    return SuiteResult("dichotomy", ok4 and ok1, [
        f"r=4, K={DICHOTOMY_K}: exponent at n=1e6 = {fin4:.6f} vs 1/4 "
        f"-> {'ok' if ok4 else 'FAIL'}",
        f"r=1, unit scale: extrapolated mu = {rep1.mu:.9f} (margin {margin:.3f} >= 0.5, "
        f"Cauchy {rep1.convergence_estimate:.2e}) -> {'ok' if ok1 else 'FAIL'}",
    ])


def _suite_gumbel_norming() -> SuiteResult:
    ok = True
    lines = []
    for lam in (0.5, 1.0, 2.0):
        for n in (10, 10**3, 10**6):
            c = gumbel_g1_scale(1, lam, gumbel_g1_btilde(1, lam, n))
            bt = gumbel_g1_btilde(1, lam, n)
            err = max(abs(c - 1.0 / lam), abs(bt - math.log(n) / lam))
            ok &= err <= 1e-9
            if err > 1e-9:
                lines.append(f"d=1 lam={lam} n={n}: closed-form gap {err:.2e}")
    lines.append("d=1: (c_n, btilde_n) == (1/lam, ln n/lam) to 1e-9")
    worst = 0.0
    for n in (10, 10**3, 10**6):
        gap = abs(gumbel_g1_btilde_lambert(1.0, n) - gumbel_g1_btilde(2, 1.0, n))
        worst = max(worst, gap)
    ok &= worst <= 1e-8
    lines.append(f"d=2: Lambert vs quantile route, worst gap {worst:.2e} (<= 1e-8)")
    # branch residual at a generic point
    from .norming import lambert_w_minus1
    u = -0.05
    w = lambert_w_minus1(u)
    res = abs(w * math.exp(w) - u)
    ok &= res <= 1e-12
    lines.append(f"Lambert W_-1 residual at u=-0.05: {res:.2e} (<= 1e-12)")
    return SuiteResult("gumbel-norming", ok, lines)


def _suite_gumbel_g2(m: int = 2000) -> SuiteResult:
    g = ConnectionFunction(Family.G2, alpha=2.0, lam=1.0)
    n = 800
    R = padding_for_certificate(g, 1.0, 1, NormKind.ONE, n, 1e-4)
    c, b = gumbel_g2_schedule(1, 2.0, 1.0, "continuous", 1.0, n=n)
    job = _ContinuousJob(g, 1.0, 1, NormKind.ONE, n, R, math.inf)
    records = run_replicates(job, m, 80_008)
    vals = np.array([((rec.e_star or 0.0) ** 2.0 - b) / c for rec in records])
    emp = EmpiricalDistribution.from_samples(vals)
    ks = ks_distance(emp, lambda r: np.exp(-np.exp(-r)))
    ok = ks <= 0.06
    return SuiteResult("gumbel-g2", ok, [
        f"n=800, m={m}, root-calibrated shift: KS vs Gumbel on the alpha-power scale "
        f"= {ks:.4f} (<= 0.06) -> {'ok' if ok else 'FAIL'}"])


def _suite_weibull_continuous(m: int = 2000) -> SuiteResult:
    g = ConnectionFunction(Family.W, alpha=1.0, M=1.0)
    n = 800
    sched = weibull_schedule(1, 1.0, 1.0, 1.0)
    cn = sched.c(n)
    job = _ContinuousJob(g, 1.0, 1, NormKind.ONE, n, 1.0, math.inf)
    records = run_replicates(job, m, 90_009)
    cert = records[0].truncation_certificate
    vals = np.array([((rec.e_star or 0.0) - 1.0) / cn for rec in records])
    emp = EmpiricalDistribution.from_samples(vals)
    law = lambda r: limit_cdf(sched.law, r)
    ks = ks_distance(emp, np.vectorize(law))
    ok = ks <= 0.06 and cert == 0.0
    return SuiteResult("weibull-continuous", ok, [
        f"n=800, m={m}: KS vs Weibull(2) = {ks:.4f} (<= 0.06), certificate = {cert} "
        f"-> {'ok' if ok else 'FAIL'}"])


def _suite_weibull_discrete(m: int = 200) -> SuiteResult:
    g = ConnectionFunction(Family.W, alpha=1.0, M=1.5)
    ok = True
    lines = []
    last = math.inf
    for n in (10**2, 10**3, 10**4):
        cn = n ** (-1.0 / 2.0)
        vals = []
        for i in range(m):
            rec = sample_discrete_undirected(g, 1, n, math.inf, SeedSpec(100_010 + n, i))
            vals.append(((rec.e_star or 0.0) - 1.5) / cn)
        med = float(np.median(vals))
        ok &= med < last
        lines.append(f"n={n}: median of c_n^-1 (e* - M) = {med:.2f}")
        last = med
    ok &= last < -10.0
    lines.append(f"medians decreasing, final {last:.2f} < -10: {'ok' if ok else 'FAIL'}")
    return SuiteResult("weibull-discrete", ok, lines)


def _suite_brute_force(m: int = 10_000) -> SuiteResult:
    g = ConnectionFunction(Family.F, alpha=2.0)
    worst = 0.0
    for n in (0, 1, 2, 3):
        for t in (0.0, 1.5, 3.0, 7.0, 12.5):
            a = undirected_cdf_d1(g, n, t)
            b = undirected_cdf_d1_reference(2.0, n, t)
            worst = max(worst, abs(a - b))
    ok = worst <= 1e-8
    lines = [f"undirected exact CDF vs pairwise product (n<=3, 5 thresholds): "
             f"worst gap {worst:.2e} (<= 1e-8)"]
    vals = []
    for i in range(m):
        rec = sample_discrete_undirected(g, 1, 0, math.inf, SeedSpec(110_011, i))
        vals.append(rec.e_star or 0.0)
    emp = EmpiricalDistribution.from_samples(np.array(vals))
    cdf = np.vectorize(lambda t: undirected_cdf_d1(g, 0, float(t)))
    cdf_left = np.vectorize(
        lambda t: undirected_cdf_d1(g, 0, math.ceil(t) - 1.0) if t > 0 else 0.0)
    ks = ks_distance(emp, cdf, cdf_left=cdf_left)
    band = dkw_epsilon(m, 0.01)
    ok &= ks <= band
    lines.append(f"n=0 sampler ECDF vs exact CDF: KS={ks:.4f} band={band:.4f}")
    return SuiteResult("brute-force", ok, lines)


def _suite_reproducibility() -> SuiteResult:
    cfg = ExperimentConfig.from_dict({
        "model": "dLRPq", "family": "F", "alpha": 2.0, "d": 1,
        "n_grid": [20], "m": 64, "threshold": 10.0, "seed": 7,
    })
    texts = []
    for workers in (1, 3):
        cfg.workers = workers
        texts.append(simulate_csv(cfg, 20))
    ok = texts[0] == texts[1]
    return SuiteResult("reproducibility", ok, [
        f"per-replicate CSV byte-identical across worker counts 1 and 3: {ok}"])


ACCEPTANCE_SUITES = {
    "geometry": _suite_geometry,
    "typical-edge": _suite_typical_edge,
    "frechet-continuous": _suite_frechet_continuous,
    "bound-rate": _suite_bound_rate,
    "directed-exact": _suite_directed_exact,
    "dichotomy": _suite_dichotomy,
    "gumbel-norming": _suite_gumbel_norming,
    "gumbel-g2": _suite_gumbel_g2,
    "weibull-continuous": _suite_weibull_continuous,
    "weibull-discrete": _suite_weibull_discrete,
    "brute-force": _suite_brute_force,
    "reproducibility": _suite_reproducibility,
}


def cmd_verify(suite: str) -> int:
    if suite == "all":
        names = list(ACCEPTANCE_SUITES)
    elif suite in ACCEPTANCE_SUITES:
        names = [suite]
    else:
        print(f"unknown suite {suite!r}; available: "
              f"{', '.join(list(ACCEPTANCE_SUITES) + ['all'])}", file=sys.stderr)
        return EXIT_VALIDATION
    all_ok = True
    for name in names:
        result = ACCEPTANCE_SUITES[name]()
        print(result.report())
        all_ok &= result.passed
    return EXIT_OK if all_ok else EXIT_ACCEPTANCE


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="longedge", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("simulate", "exact", "norming", "sweep"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--workers", type=int, default=None)
        sp.add_argument("--out", default="out")
    sv = sub.add_parser("verify")
    sv.add_argument("--suite", default="all")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args.suite)
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        if args.workers is not None:
            if args.workers < 1:
                raise ConfigError("workers must be >= 1")
            cfg.workers = args.workers
        out = Path(args.out)
        dispatch = {"simulate": cmd_simulate, "exact": cmd_exact,
                    "norming": cmd_norming, "sweep": cmd_sweep}
        return dispatch[args.command](cfg, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (BudgetError, ArithmeticError) as exc:
        print(f"runtime/budget error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
