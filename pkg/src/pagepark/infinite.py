"""Jamming on the integer line, sampled exactly through local windows.

Site 0 is classified by growing the mark sequence outward until the first
strict local minimum appears on each side: the ascending run ending at slot -1
(the rise, length s) and the descending run starting at slot 0 (the descent,
length s'). Site 0 is vacant iff s and s' are both even, and its arrival time is

    tau_0 = xi_{-1}  if s is odd and s' even   (covered from the left)
          = xi_0     if s is even and s' odd   (covered from the right)
          = min(xi_{-1}, xi_0) if both are odd
          = +inf     if both are even.

Run lengths have 1/l! tails, so windows stay tiny; the cap exists only to turn
an astronomically unlikely runaway into a loud error instead of silent bias.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_SEED, EXP, ArrivalDistribution, PriorityField, SeedSpec
from .stats import MCEstimate, proportion_estimate

WINDOW_CAP = 10_000  # generated indices per side before aborting loudly
_CHUNK = 1 << 15


class RareEventCapError(RuntimeError):
    """A window or run outgrew the configured cap (never silently truncated)."""


@dataclass(frozen=True, eq=False)
class WindowSample:
    """One exact sample of site 0 on the infinite line.

    xi_window spans [m-1, m'+1] where m = -rise_length and m' = descent_length-1
    are the bracketing local minima; the extra left mark lets the local-minimum
    invariant be checked. tau_0 is +inf when the site stays vacant.
    """

    xi_window: PriorityField
    occupancy_at_0: bool
    tau_0: float
    rise_length: int
    descent_length: int

    @property
    def left_min_index(self) -> int:
        return -self.rise_length

    @property
    def right_min_index(self) -> int:
        return self.descent_length - 1


def _tau_single(rise: int, desc: int, xi_left: float, xi_right: float) -> float:
    rise_odd = rise % 2 == 1
    desc_odd = desc % 2 == 1
    if rise_odd and desc_odd:
        return min(xi_left, xi_right)
    if rise_odd:
        return xi_left
    if desc_odd:
        return xi_right
    return math.inf


def sample_site_infinite(
    dist: ArrivalDistribution = EXP,
    rng: np.random.Generator | SeedSpec | None = None,
    cap: int = WINDOW_CAP,
) -> WindowSample:
    """Sample one window around site 0; marks are generated lazily outward.

    Draw order is fixed (right side xi_0, xi_1, ..., then left side xi_-1,
    xi_-2, ...), so a seed reproduces the sample bit for bit. Duplicate float
    marks are re-drawn (tie resolution at generation)."""
    if rng is None:
        rng = SeedSpec(DEFAULT_SEED).generator()
    elif isinstance(rng, SeedSpec):
        rng = rng.generator()
    seen: set[float] = set()

    def draw() -> float:
        while True:
            x = float(dist.ppf(rng.random(1))[0])
            if x not in seen:
                seen.add(x)
                return x

    right = [draw()]  # xi_0, xi_1, ... up to and including the first ascent
    while len(right) < 2 or not right[-2] <= right[-1]:
        if len(right) > cap:
            raise RareEventCapError(f"descent run exceeded cap {cap}")
        right.append(draw())
    desc = len(right) - 1  # first j >= 1 with xi_{j-1} <= xi_j

    left = [draw()]  # xi_-1, xi_-2, ... until a new draw exceeds its successor
    while len(left) < 2 or left[-1] <= left[-2]:
        if len(left) > cap:
            raise RareEventCapError(f"rise run exceeded cap {cap}")
        left.append(draw())
    rise = len(left) - 1

    values = np.array(left[::-1] + right, dtype=np.float64)
    window = PriorityField(values, index_offset=-rise - 1)
    tau = _tau_single(rise, desc, left[0], right[0])
    return WindowSample(
        xi_window=window,
        occupancy_at_0=not (rise % 2 == 0 and desc % 2 == 0),
        tau_0=tau,
        rise_length=rise,
        descent_length=desc,
    )


def _run_lengths_batch(
    rng: np.random.Generator,
    dist: ArrivalDistribution,
    size: int,
    cap: int,
    left_side: bool,
) -> tuple[np.ndarray, np.ndarray]:
    """Run length and first mark for one side of `size` replicas.

    Right side: length = first j >= 1 with xi_{j-1} <= xi_j. Left side mirrors
    it with the tie broken the other way (smaller slot index acts first)."""
    first = dist.ppf(rng.random(size))
    length = np.ones(size, dtype=np.int64)
    prev = first.copy()
    alive = np.arange(size)
    j = 1
    while alive.size:
        if j > cap:
            raise RareEventCapError(f"run exceeded cap {cap} for {alive.size} replicas")
        draws = dist.ppf(rng.random(alive.size))
        if left_side:
            cont = draws <= prev[alive]
        else:
            cont = prev[alive] > draws
        stopped = alive[~cont]
        length[stopped] = j
        keep = alive[cont]
        prev[keep] = draws[cont]
        alive = keep
        j += 1
    return length, first


@dataclass(frozen=True, eq=False)
class RunsSample:
    """Batched (rise, descent, xi_-1, xi_0) draws for site 0."""

    rise: np.ndarray
    descent: np.ndarray
    xi_left: np.ndarray
    xi_right: np.ndarray

    @property
    def replicas(self) -> int:
        return int(self.rise.size)

    @property
    def vacant(self) -> np.ndarray:
        return (self.rise % 2 == 0) & (self.descent % 2 == 0)

    def tau(self) -> np.ndarray:
        rise_odd = self.rise % 2 == 1
        desc_odd = self.descent % 2 == 1
        tau = np.full(self.replicas, np.inf)
        tau[rise_odd] = self.xi_left[rise_odd]
        only_desc = desc_odd & ~rise_odd
        tau[only_desc] = self.xi_right[only_desc]
        both = rise_odd & desc_odd
        tau[both] = np.minimum(self.xi_left[both], self.xi_right[both])
        return tau


def _runs_chunk(size: int, spec: SeedSpec, dist: ArrivalDistribution, cap: int) -> RunsSample:
    rng = spec.generator()
    desc, xi_right = _run_lengths_batch(rng, dist, size, cap, left_side=False)
    rise, xi_left = _run_lengths_batch(rng, dist, size, cap, left_side=True)
    return RunsSample(rise=rise, descent=desc, xi_left=xi_left, xi_right=xi_right)


def sample_runs(
    replicas: int,
    seed: int | SeedSpec = DEFAULT_SEED,
    dist: ArrivalDistribution = EXP,
    threads: int = 1,
    cap: int = WINDOW_CAP,
) -> RunsSample:
    """Vectorised window sampling, chunked into fixed-size independent streams.

    Chunk boundaries do not depend on `threads`, so results are identical for
    any thread count."""
    if replicas < 1:
        raise ValueError("need at least 1 replica")
    master = seed.master_seed if isinstance(seed, SeedSpec) else int(seed)
    sizes = [_CHUNK] * (replicas // _CHUNK)
    if replicas % _CHUNK:
        sizes.append(replicas % _CHUNK)
    jobs = [(sz, SeedSpec(master, ci)) for ci, sz in enumerate(sizes)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda j: _runs_chunk(j[0], j[1], dist, cap), jobs))
    else:
        parts = [_runs_chunk(sz, sp, dist, cap) for sz, sp in jobs]
    return RunsSample(
        rise=np.concatenate([p.rise for p in parts]),
        descent=np.concatenate([p.descent for p in parts]),
        xi_left=np.concatenate([p.xi_left for p in parts]),
        xi_right=np.concatenate([p.xi_right for p in parts]),
    )


def vacancy_mc(
    replicas: int,
    seed: int | SeedSpec = DEFAULT_SEED,
    dist: ArrivalDistribution = EXP,
    threads: int = 1,
) -> MCEstimate:
    """Monte Carlo estimate of P(site 0 vacant at jamming) on the line."""
    runs = sample_runs(replicas, seed, dist, threads)
    return proportion_estimate(int(runs.vacant.sum()), runs.replicas)


def density_at_time_mc(
    t_grid,
    replicas: int,
    seed: int | SeedSpec = DEFAULT_SEED,
    dist: ArrivalDistribution = EXP,
    threads: int = 1,
) -> list[MCEstimate]:
    """P(site 0 occupied by time t) on a grid, one estimate per t.

    A single batch of arrival times serves the whole grid, so the estimated
    curve is exactly nondecreasing in t."""
    runs = sample_runs(replicas, seed, dist, threads)
    tau = runs.tau()
    return [proportion_estimate(int((tau <= t).sum()), runs.replicas) for t in np.atleast_1d(t_grid)]


def odd_descent_time_prob_mc(
    t_grid,
    replicas: int,
    seed: int | SeedSpec = DEFAULT_SEED,
    dist: ArrivalDistribution = EXP,
    threads: int = 1,
) -> list[MCEstimate]:
    """f(t) = P(xi_0 <= t and the descent at 0 is odd), estimated on a grid."""
    runs = sample_runs(replicas, seed, dist, threads)
    desc_odd = runs.descent % 2 == 1
    return [
        proportion_estimate(int((desc_odd & (runs.xi_right <= t)).sum()), runs.replicas)
        for t in np.atleast_1d(t_grid)
    ]


@dataclass(frozen=True)
class AutocovEstimate:
    """Estimated cov(X(0), X(k)) of the jammed occupancy field."""

    k: int
    estimate: float
    stderr: float
    mean_site_0: float
    mean_site_k: float
    replicas: int


def _scalar_occupancy_pair(values: np.ndarray, k: int, lo: int, rng, dist, cap: int):
    """Fallback for strip rows whose runs touch the strip edge: extend the row's
    mark sequence lazily (fresh independent draws) and classify exactly."""
    marks = {lo + j: float(v) for j, v in enumerate(values)}
    hi = lo + values.size - 1

    def mark(idx: int) -> float:
        nonlocal lo, hi
        while idx < lo:
            lo -= 1
            marks[lo] = float(dist.ppf(rng.random(1))[0])
        while idx > hi:
            hi += 1
            marks[hi] = float(dist.ppf(rng.random(1))[0])
        return marks[idx]

    def occupied(site: int) -> bool:
        j = 1
        while True:
            if j > cap:
                raise RareEventCapError(f"descent run exceeded cap {cap}")
            if mark(site + j - 1) <= mark(site + j):
                desc = j
                break
            j += 1
        j = 1
        while True:
            if j > cap:
                raise RareEventCapError(f"rise run exceeded cap {cap}")
            if not mark(site - j - 1) <= mark(site - j):
                rise = j
                break
            j += 1
        return not (rise % 2 == 0 and desc % 2 == 0)

    return occupied(0), occupied(k)


def _occupancy_pair_chunk(
    size: int, spec: SeedSpec, k: int, dist: ArrivalDistribution, buffer: int, cap: int, reflect: bool
) -> tuple[np.ndarray, np.ndarray]:
    """Occupancy of sites 0 and k from one strip of marks per replica."""
    rng = spec.generator()
    lo = -(buffer + 2)
    hi = k + buffer + 2
    width = hi - lo + 1
    values = dist.ppf(rng.random((size, width)))
    if reflect:
        values = values[:, ::-1]  # mirrored field; site j maps to k - j
    asc = values[:, :-1] <= values[:, 1:]

    def site_occupancy(site: int) -> tuple[np.ndarray, np.ndarray]:
        c = site - lo
        right = asc[:, c:]
        has_stop = right.any(axis=1)
        desc = right.argmax(axis=1) + 1
        rev = ~asc[:, c - 2 :: -1]
        has_break = rev.any(axis=1)
        rise = rev.argmax(axis=1) + 1
        occ = (rise % 2 == 1) | (desc % 2 == 1)
        return occ, ~(has_stop & has_break)

    occ0, edge0 = site_occupancy(0)
    occk, edgek = site_occupancy(k) if k else (occ0, edge0)
    edge = edge0 | edgek
    for row in np.flatnonzero(edge):  # probability ~ 1/buffer!, kept exact anyway
        occ0[row], occk[row] = _scalar_occupancy_pair(values[row], k, lo, rng, dist, cap)
    return occ0, occk


def autocovariance_mc(
    k: int,
    replicas: int,
    seed: int | SeedSpec = DEFAULT_SEED,
    threads: int = 1,
    reflected: bool = False,
    buffer: int = 64,
    cap: int = WINDOW_CAP,
) -> AutocovEstimate:
    """Estimate cov(X(0), X(k)) of the jammed field on the line.

    Occupancy depends only on the ordering of the marks, so the kernel samples
    uniform marks; `reflected` classifies the mirrored field instead (the law
    is reflection-invariant, which tests use as a consistency check)."""
    if k < 0:
        raise ValueError("lag must be >= 0")
    if replicas < 2:
        raise ValueError("need at least 2 replicas")
    master = seed.master_seed if isinstance(seed, SeedSpec) else int(seed)
    chunk = 1 << 14
    sizes = [chunk] * (replicas // chunk)
    if replicas % chunk:
        sizes.append(replicas % chunk)
    dist = ArrivalDistribution("uniform")
    jobs = [(sz, SeedSpec(master, ci)) for ci, sz in enumerate(sizes)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(
                pool.map(lambda j: _occupancy_pair_chunk(j[0], j[1], k, dist, buffer, cap, reflected), jobs)
            )
    else:
        parts = [_occupancy_pair_chunk(sz, sp, k, dist, buffer, cap, reflected) for sz, sp in jobs]
    x = np.concatenate([p[0] for p in parts]).astype(np.float64)
    y = np.concatenate([p[1] for p in parts]).astype(np.float64)
    r = x.size
    prod = (x - x.mean()) * (y - y.mean())
    cov = float(prod.sum() / (r - 1))
    stderr = float(prod.std(ddof=1) / math.sqrt(r))
    return AutocovEstimate(
        k=k,
        estimate=cov,
        stderr=stderr,
        mean_site_0=float(x.mean()),
        mean_site_k=float(y.mean()),
        replicas=r,
    )
