"""Seeded, reproducible samplers for the four percolation models, producing
the longest window edge, the exceedance count, and the typical edge at the
origin.  Lattice paths are exact (certificate 0) via inverse transforms on
closed-form per-vertex maximum laws and per-distance-class edge counts; the
continuous path truncates at a padding radius and reports a Mecke-type
union bound as its certificate.

Randomness is counter-based: (master seed, replicate index, substream
label) map to an independent Philox stream, so identical seeds give
bit-identical samples on any worker count and execution order.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import optimize

from .connection import (
    ConnectionFunction,
    Family,
    _remainder_bounds,
    _shell_counts_float,
    tail_mass_continuum,
    tail_sum_lattice,
)
from .geometry import BudgetError, NormKind, enumerate_window


# ---------------------------------------------------------------------------
# seeding
# ---------------------------------------------------------------------------


def _label_hash(label: str) -> int:
    return int.from_bytes(hashlib.sha256(label.encode()).digest()[:4], "big")


@dataclass(frozen=True)
class SeedSpec:
    """Counter-based stream coordinates: the same (master_seed,
    replicate_index, label) always yields the same Philox stream."""

    master_seed: int
    replicate_index: int = 0
    label: str = ""

    def __post_init__(self) -> None:
        if self.replicate_index < 0:
            raise ValueError("replicate_index must be >= 0")

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(
            self.master_seed,
            spawn_key=(self.replicate_index, _label_hash(self.label)),
        )
        return np.random.Generator(np.random.Philox(seq))


# ---------------------------------------------------------------------------
# records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExceedanceRecord:
    """Longest-edge and exceedance outcome of one replicate.

    e_star is None when no edge meets the window at all.  The certificate
    bounds the probability that the record differs from the untruncated
    model (0 for the exact lattice samplers)."""

    e_star: float | None
    w_count: int
    threshold_used: float
    truncation_certificate: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.truncation_certificate <= 1.0:
            raise ValueError("certificate must lie in [0, 1]")
        if self.w_count < 0:
            raise ValueError("w_count must be >= 0")
        exceeds = self.e_star is not None and self.e_star > self.threshold_used
        if exceeds != (self.w_count >= 1):
            raise ValueError("w_count >= 1 must match e_star > threshold")


@dataclass(frozen=True)
class GraphSample:
    """Optional explicit realization: positions, edges (index pairs plus
    lengths; every edge has a window endpoint), window and padding."""

    positions: np.ndarray
    edges: list
    d: int
    n: float
    padding: float


# ---------------------------------------------------------------------------
# typical edge (Palm measure)
# ---------------------------------------------------------------------------


def sample_typical_edge(
    g: ConnectionFunction,
    rho: float,
    d: int,
    norm: NormKind,
    seed: SeedSpec,
    size: int = 1,
) -> np.ndarray:
    """Exact inverse-CDF draws of the longest edge at the origin.

    CDF exp(-rho G(r)); returns NaN where no edge exists at all (the atom
    exp(-rho G(0)) at the bottom).
    """
    rng = seed.generator()
    u = rng.random(size)
    G0 = tail_mass_continuum(g, d, norm, 0.0).value
    # the no-edge atom exp(-rho G(0)) is the exact mass of {e_0* = 0}
    out = np.zeros(size)
    hit = u > np.exp(-rho * G0)
    if g.family is Family.W:
        hi0 = g.M
    else:
        hi0 = 1.0
    for i in np.nonzero(hit)[0]:
        target = -math.log(u[i]) / rho
        f = lambda r: tail_mass_continuum(g, d, norm, r).value - target
        hi = hi0
        while f(hi) > 0:
            hi *= 2.0
        out[i] = optimize.brentq(f, 0.0, hi, xtol=1e-12, rtol=8.9e-16)
    return out


# ---------------------------------------------------------------------------
# lattice per-vertex maximum tables
# ---------------------------------------------------------------------------


class LatticeMaxTable:
    """Tail table T[k] = sum_{j > k} count(j) w(j) for k = 0..k_table, with
    the beyond-table remainder folded in as its certified midpoint
    (half-width ~ 1e-12 for the polynomial family, 0 effectively for the
    fast-decaying ones).  Supports vectorized inverse-transform sampling of
    per-vertex maxima, optionally restricted to partners at distance >= dmin.
    """

    def __init__(self, g: ConnectionFunction, d: int, domain: str, k_table: int = 4096):
        self.g, self.d, self.domain = g, d, domain
        ks = np.arange(1, k_table + 1, dtype=float)
        terms = _shell_counts_float(d, domain, ks) * np.asarray(g.weight(ks))
        if g.family is Family.W:
            rem = 0.0
        else:
            lo, hi = _remainder_bounds(g, d, domain, k_table)
            rem = (lo + hi) / 2.0
        T = np.empty(k_table + 1)
        T[k_table] = rem
        T[:k_table] = rem + np.cumsum(terms[::-1])[::-1]
        self.T = T
        self.k_table = k_table

    def tail(self, k) -> np.ndarray:
        """T(k), extended beyond the table by the certified remainder."""
        k = np.asarray(k, dtype=int)
        kk = np.minimum(k, self.k_table)
        out = self.T[kk]
        big = k > self.k_table
        if np.any(big):
            out = np.array(out, dtype=float)
            for i in np.nonzero(big)[0]:
                out[i] = self._deep_tail(int(k[i]))
        return out

    def _deep_tail(self, k: int) -> float:
        if self.g.family is Family.W:
            return 0.0  # finite support: no partners beyond the table
        lo, hi = _remainder_bounds(self.g, self.d, self.domain, k)
        return (lo + hi) / 2.0

    def _deep_invert(self, e: float) -> int:
        """min{k: T(k) <= e} beyond the table (polynomial family only)."""
        lo, hi = self.k_table, 2 * self.k_table
        while self._deep_tail(hi) > e:
            lo, hi = hi, hi * 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self._deep_tail(mid) > e:
                lo = mid
            else:
                hi = mid
        return hi

    def sample(self, e: np.ndarray, dmin=1) -> np.ndarray:
        """Per-vertex maxima from standard exponentials e: the maximum over
        partners at distances >= dmin is min{k: T(max(k, dmin-1)) <= e},
        with 0 meaning no edge."""
        e = np.asarray(e, dtype=float)
        dmin = np.broadcast_to(np.asarray(dmin, dtype=int), e.shape)
        idx = np.searchsorted(-self.T, -e, side="left")
        deep = idx > self.k_table
        if np.any(deep):
            idx = np.array(idx)
            for i in np.nonzero(deep)[0]:
                idx[i] = self._deep_invert(float(e[i]))
        # no partner below dmin exists: outcome 0 when even the full tail
        # beyond dmin-1 is too small to produce an edge
        gate = self.tail(np.maximum(dmin - 1, 0))
        return np.where(gate <= e, 0, np.maximum(idx, dmin))

    def window_capped_sample(self, e: np.ndarray, cap: np.ndarray) -> np.ndarray:
        """Maxima over partners at distances 1..cap only (finite block):
        min{k: T(k) - T(cap) <= e}, capped at cap; 0 when no edge."""
        e = np.asarray(e, dtype=float)
        cap = np.broadcast_to(np.asarray(cap, dtype=int), e.shape)
        shifted = e + self.T[np.minimum(cap, self.k_table)]
        idx = np.searchsorted(-self.T, -shifted, side="left")
        out = np.minimum(idx, cap)
        return np.where(self.T[0] - self.T[np.minimum(cap, self.k_table)] <= e, 0, out)


@lru_cache(maxsize=32)
def _max_table(g: ConnectionFunction, d: int, domain: str) -> LatticeMaxTable:
    return LatticeMaxTable(g, d, domain)


# ---------------------------------------------------------------------------
# directed lattice models
# ---------------------------------------------------------------------------


def sample_directed(
    g: ConnectionFunction,
    d: int,
    n: int,
    variant: str,
    seed: SeedSpec,
    threshold: float = math.inf,
    return_maxima: bool = False,
):
    """Exact draw of the longest out-edge and exceedance count for the
    directed lattice models: per-vertex maxima are i.i.d. with CDF
    exp(-T(k)), sampled by inverse transform over the tail table."""
    if variant not in ("dLRP", "dLRPq"):
        raise ValueError(f"unknown directed variant {variant!r}")
    domain = "quadrant" if variant == "dLRPq" else "full"
    table = _max_table(g, d, domain)
    rng = seed.generator()
    N = (2 * n + 1) ** d
    if N > 20_000_000:
        raise BudgetError(f"vertex count {N} exceeds the sampling budget")
    maxima = table.sample(rng.exponential(size=N))
    e_star = int(maxima.max()) if maxima.size else 0
    rec = ExceedanceRecord(
        e_star=float(e_star) if e_star > 0 else None,
        w_count=int(np.count_nonzero(maxima > threshold)),
        threshold_used=threshold,
    )
    if return_maxima:
        return rec, maxima
    return rec


# ---------------------------------------------------------------------------
# undirected lattice, d = 1 exact path (and the three-model coupling)
# ---------------------------------------------------------------------------


def _window_edges_d1(g: ConnectionFunction, n: int, rng) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All present window-window edges by distance class: class k has
    N - k pairs, each open with probability g(k).  Returns (left vertex
    indices, right vertex indices, lengths)."""
    N = 2 * n + 1
    ks = np.arange(1, N, dtype=int)
    gk = np.asarray(g.eval(ks.astype(float)))
    counts = rng.binomial(N - ks, gk)
    lefts, rights, lens = [], [], []
    for j in np.nonzero(counts)[0]:
        k = int(ks[j])
        c = int(counts[j])
        pos = rng.choice(N - k, size=c, replace=False)
        lefts.append(pos)
        rights.append(pos + k)
        lens.append(np.full(c, k))
    if lefts:
        return np.concatenate(lefts), np.concatenate(rights), np.concatenate(lens)
    return np.empty(0, int), np.empty(0, int), np.empty(0, int)


def sample_discrete_undirected(
    g: ConnectionFunction,
    d: int,
    n: int,
    threshold: float,
    seed: SeedSpec,
    allow_large_d: bool = False,
) -> ExceedanceRecord:
    """Exact draw for the undirected lattice: window-window edges by
    distance class, window-outside maxima per vertex by inverse transform
    (distinct pairs, hence independent blocks).  d = 1 is the fast exact
    path; d >= 2 is an explicit-enumeration fallback gated by a flag."""
    if d == 1:
        rec, _ = _sample_d1_coupled(g, n, threshold, seed, want_directed=False)
        return rec
    if d >= 3 and not allow_large_d:
        raise BudgetError("undirected sampling for d >= 3 requires allow_large_d=True")
    return _sample_undirected_enumerated(g, d, n, threshold, seed)


def _sample_d1_coupled(
    g: ConnectionFunction,
    n: int,
    threshold: float,
    seed: SeedSpec,
    want_directed: bool = True,
):
    """One d = 1 lattice replicate; returns the undirected record and,
    when requested, coupled records for both directed models.

    Shared randomness: window-window edges and the per-vertex outside
    maxima drive all three models; the full directed model adds fresh
    in-window reverse edges.  Pathwise, quadrant-directed <= undirected <=
    fully-directed, with exact marginals for each model.
    """
    rng = seed.generator()
    N = 2 * n + 1
    table = _max_table(g, 1, "quadrant")

    lefts, rights, lens = _window_edges_d1(g, n, rng)
    idx = np.arange(N)
    # vertex i sits at x = i - n; nearest right-outside partner at 2n-i+1,
    # nearest left-outside partner at i+1
    m_rout = table.sample(rng.exponential(size=N), dmin=2 * n + 1 - idx)
    m_lout = table.sample(rng.exponential(size=N), dmin=idx + 1)

    # owned maximum of vertex i: outside edges on both sides plus the
    # window-window edges where i is the left endpoint.  Every edge meeting
    # the window has exactly one owner, so max(owned) is still e_n* while
    # the count credits each edge once (the convention behind the exact CDF
    # exponent and expected_exceedances).
    owned = np.maximum(m_rout, m_lout)
    if lens.size:
        np.maximum.at(owned, lefts, lens)
    und = _record_from_incident(owned, threshold)
    if not want_directed:
        return und, None

    m_q = m_rout.copy()
    if lens.size:
        np.maximum.at(m_q, lefts, lens)  # right out-edges share the pair draws
    rec_q = _record_from_incident(m_q, threshold)

    # fresh reverse edges to in-window left partners (vertex i has i of them)
    m_lfresh = table.window_capped_sample(rng.exponential(size=N), cap=idx)
    m_full = np.maximum(np.maximum(m_q, m_lout), m_lfresh)
    rec_full = _record_from_incident(m_full, threshold)
    return und, (rec_q, rec_full)


def _record_from_incident(incident: np.ndarray, threshold: float) -> ExceedanceRecord:
    e_star = float(incident.max()) if incident.size else 0.0
    return ExceedanceRecord(
        e_star=e_star if e_star > 0 else None,
        w_count=int(np.count_nonzero(incident > threshold)),
        threshold_used=threshold,
    )


def sample_discrete_coupled(
    g: ConnectionFunction, n: int, threshold: float, seed: SeedSpec
) -> tuple[ExceedanceRecord, ExceedanceRecord, ExceedanceRecord]:
    """(quadrant-directed, undirected, fully-directed) records from one
    shared-randomness d = 1 replicate; the longest edges are ordered
    e*(dLRPq) <= e* <= e*(dLRP) pathwise."""
    und, pair = _sample_d1_coupled(g, n, threshold, seed, want_directed=True)
    rec_q, rec_full = pair
    return rec_q, und, rec_full


def _sample_undirected_enumerated(
    g: ConnectionFunction, d: int, n: int, threshold: float, seed: SeedSpec
) -> ExceedanceRecord:
    """O(window^2) explicit undirected sampler for d >= 2: window-window
    pairs enumerated directly, per-vertex outside maxima by inverse
    transform on the offset tail sum."""
    from .connection import tail_sum_lattice_offset

    pts = list(enumerate_window(d, n, max_points=200_000))
    N = len(pts)
    if N * N > 50_000_000:
        raise BudgetError(f"window pair count {N * N} exceeds the sampling budget")
    rng = seed.generator()
    arr = np.array(pts)
    # owned maximum per vertex: window-window pairs credited to the
    # earlier-enumerated endpoint only, plus all own outside edges
    incident = np.zeros(N)
    for i in range(N):
        dist = np.abs(arr[i + 1 :] - arr[i]).sum(axis=1).astype(float)
        open_edge = rng.random(dist.size) < np.asarray(g.eval(dist))
        if np.any(open_edge):
            incident[i] = max(incident[i], dist[open_edge].max())
    # outside maxima: invert s -> exp(-offset tail(s)) per vertex
    for i, x in enumerate(pts):
        e = rng.exponential()
        if tail_sum_lattice_offset(g, d, n, x, 0.0).value <= e:
            continue
        k = 1
        while tail_sum_lattice_offset(g, d, n, x, float(k)).value > e:
            k += 1
        incident[i] = max(incident[i], k)
    return _record_from_incident(incident, threshold)


# ---------------------------------------------------------------------------
# continuous model
# ---------------------------------------------------------------------------


def padding_for_certificate(
    g: ConnectionFunction, rho: float, d: int, norm: NormKind, n: int, ceiling: float
) -> float:
    """Smallest padding R with truncation certificate <= ceiling, where
    certificate = (rho^2 + rho) (2n)^d G(R)."""
    if g.family is Family.W:
        return g.M
    scale = (rho * rho + rho) * (2.0 * n) ** d

    def f(R: float) -> float:
        return scale * tail_mass_continuum(g, d, norm, R).upper - ceiling

    hi = 1.0
    while f(hi) > 0:
        hi *= 2.0
        if hi > 1e9:
            raise BudgetError("certificate ceiling unreachable at any sane padding")
    return optimize.brentq(f, hi / 2.0 if f(hi / 2.0) > 0 else 0.0, hi, rtol=1e-6)


def _continuous_certificate(
    g: ConnectionFunction, rho: float, d: int, norm: NormKind, n: int, R: float
) -> float:
    G = tail_mass_continuum(g, d, norm, R).upper
    return min((rho * rho + rho) * (2.0 * n) ** d * G, 1.0)


def sample_continuous(
    g: ConnectionFunction,
    rho: float,
    d: int,
    norm: NormKind,
    n: float,
    padding: float,
    seed: SeedSpec,
    threshold: float = math.inf,
    certificate_ceiling: float | None = None,
    return_graph: bool = False,
    local_cells: int = 8,
):
    """Longest window edge in the random connection model, truncated at
    padding R: Poisson points in the padded box, pair Bernoullis for every
    pair with a window endpoint.

    The certificate (rho^2 + rho)(2n)^d G(R) bounds the probability that
    any unsampled edge (partner beyond the padded box, or an exceedance
    seated outside it) would have changed the record.  d = 1 uses exact
    cell-distance-class thinning so expected work scales with the total
    connection mass; d >= 2 enumerates pairs directly under a budget.
    """
    if padding <= 0:
        raise ValueError("padding must be > 0")
    cert = _continuous_certificate(g, rho, d, norm, n, padding)
    if certificate_ceiling is not None and cert > certificate_ceiling:
        raise BudgetError(
            f"truncation certificate {cert:.3e} exceeds ceiling "
            f"{certificate_ceiling:.3e}; increase the padding radius"
        )
    rng = seed.generator()
    if d == 1:
        pos, edges = _continuous_pairs_d1(g, rho, n, padding, rng, local_cells)
    else:
        pos, edges = _continuous_pairs_generic(g, rho, d, norm, n, padding, rng)
    win = np.max(np.abs(pos), axis=1) <= n if pos.size else np.empty(0, bool)
    # owned maximum per point: each edge is credited to one window
    # endpoint (the coordinate-smaller one when both lie in the window),
    # matching the counting convention of expected_exceedances
    owned = np.zeros(len(pos))
    for i, j, length in edges:
        a = i if win[i] and (not win[j] or tuple(pos[i]) <= tuple(pos[j])) else j
        if length > owned[a]:
            owned[a] = length
    win_owned = owned[win]
    lengths = [length for _, _, length in edges]
    e_star = max(lengths) if lengths else 0.0
    rec = ExceedanceRecord(
        e_star=e_star if e_star > 0 else None,
        w_count=int(np.count_nonzero(win_owned > threshold)),
        threshold_used=threshold,
        truncation_certificate=cert,
    )
    if return_graph:
        return rec, GraphSample(pos, edges, d, n, padding)
    return rec


def _continuous_pairs_d1(g, rho, n, R, rng, D0):
    """Points and open edges (with a window endpoint) in d = 1.

    Pairs within D0 cells are enumerated explicitly; farther pairs are
    produced per cell-distance class D by binomial thinning at the class
    bound g((D-1)h), then accepted with g(dist)/g((D-1)h): exact, with
    expected work proportional to the connection mass.
    """
    L = n + R
    npts = rng.poisson(rho * 2.0 * L)
    x = np.sort(rng.uniform(-L, L, npts))
    pos = x.reshape(-1, 1)
    if npts < 2:
        return pos, []
    h = 1.0
    cells = np.floor((x + L) / h).astype(int)
    ncells = int(cells.max()) + 1 if npts else 0
    win = np.abs(x) <= n
    edges = []

    # local block: all pairs within D0 cells, by sorted-index shift
    shift = 1
    while shift < npts:
        i = np.arange(npts - shift)
        j = i + shift
        near = cells[j] - cells[i] <= D0
        if not np.any(near):
            break
        keep = near & (win[i] | win[j])
        ii, jj = i[keep], j[keep]
        dist = x[jj] - x[ii]
        open_edge = rng.random(ii.size) < np.asarray(g.eval(dist))
        for a, b, s in zip(ii[open_edge], jj[open_edge], dist[open_edge]):
            edges.append((int(a), int(b), float(s)))
        shift += 1

    # far classes: cell-distance D > D0
    occ = np.bincount(cells, minlength=ncells).astype(float)
    occ_nw = np.bincount(cells[~win], minlength=ncells).astype(float)
    # candidate counts per class via autocorrelation (exact after rounding)
    corr_all = _autocorr(occ)
    corr_nw = _autocorr(occ_nw)
    Ds = np.arange(D0 + 1, ncells)
    if Ds.size == 0:
        return pos, edges
    nD = np.rint(corr_all[Ds] - corr_nw[Ds]).astype(np.int64)
    gbound = np.asarray(g.eval((Ds - 1) * h))
    valid = (nD > 0) & (gbound > 0)
    counts = np.zeros(Ds.size, dtype=np.int64)
    counts[valid] = rng.binomial(nD[valid], gbound[valid])
    for di in np.nonzero(counts)[0]:
        D = int(Ds[di])
        percell = occ[: ncells - D] * occ[D:] - occ_nw[: ncells - D] * occ_nw[D:]
        cum = np.cumsum(percell)
        total = int(round(cum[-1]))
        if total != nD[di]:  # guard against autocorrelation rounding
            counts[di] = rng.binomial(total, gbound[di])
        chosen = rng.choice(total, size=int(counts[di]), replace=False)
        for gidx in np.sort(chosen):
            c = int(np.searchsorted(cum, gidx, side="right"))
            local = gidx - (int(round(cum[c - 1])) if c > 0 else 0)
            a, b = _pair_in_cells(x, cells, win, c, c + D, int(local))
            dist = x[b] - x[a]
            if rng.random() < g.eval(dist) / gbound[di]:
                edges.append((int(a), int(b), float(dist)))
    return pos, edges


def _autocorr(v: np.ndarray) -> np.ndarray:
    m = 1 << (2 * len(v) - 1).bit_length()
    f = np.fft.rfft(v, m)
    full = np.fft.irfft(f * np.conj(f), m)
    return full[: len(v)]


def _pair_in_cells(x, cells, win, c1, c2, local):
    """The local-th window-involved pair between cells c1 and c2, in the
    canonical (points of c1) x (points of c2) minus (nonwindow x nonwindow)
    order."""
    i0, i1 = np.searchsorted(cells, [c1, c1 + 1])
    j0, j1 = np.searchsorted(cells, [c2, c2 + 1])
    k = 0
    for i in range(i0, i1):
        for j in range(j0, j1):
            if not (win[i] or win[j]):
                continue
            if k == local:
                return i, j
            k += 1
    raise AssertionError("pair index out of range: inconsistent candidate count")


def _continuous_pairs_generic(g, rho, d, norm, n, R, rng):
    L = n + R
    vol = (2.0 * L) ** d
    npts = rng.poisson(rho * vol)
    if npts * npts > 50_000_000:
        raise BudgetError(f"pair count {npts * npts} exceeds the sampling budget")
    pos = rng.uniform(-L, L, size=(npts, d))
    if norm is NormKind.ONE:
        dist_fn = lambda a, b: np.abs(b - a).sum(axis=1)
    elif norm is NormKind.TWO:
        dist_fn = lambda a, b: np.sqrt(((b - a) ** 2).sum(axis=1))
    else:
        dist_fn = lambda a, b: np.abs(b - a).max(axis=1)
    win = np.max(np.abs(pos), axis=1) <= n if npts else np.empty(0, bool)
    edges = []
    for i in range(npts - 1):
        js = np.arange(i + 1, npts)
        keep = win[i] | win[js]
        js = js[keep]
        if js.size == 0:
            continue
        dist = dist_fn(pos[i], pos[js])
        open_edge = rng.random(js.size) < np.asarray(g.eval(dist))
        for j, s in zip(js[open_edge], dist[open_edge]):
            edges.append((int(i), int(j), float(s)))
    return pos, edges


# ---------------------------------------------------------------------------
# replicates
# ---------------------------------------------------------------------------


def run_replicates(sample_fn, m: int, master_seed: int, workers: int = 1) -> list:
    """m independent records, one per replicate index, merged in index
    order regardless of worker count or completion order.

    sample_fn(seed: SeedSpec) -> record; it must be picklable for
    workers > 1.
    """
    if m < 1:
        raise ValueError("need m >= 1 replicates")
    seeds = [SeedSpec(master_seed, i) for i in range(m)]
    if workers <= 1:
        return [sample_fn(s) for s in seeds]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(sample_fn, seeds, chunksize=max(1, m // (8 * workers))))
