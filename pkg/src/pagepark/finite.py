"""Jamming on a finite interval: the uniform-draw process, the priority-field
construction, and the parity classifier that links them.

Conventions used throughout (1-based sites and slots in the API):

* slot i covers sites (i, i+1); marks live on slots 1..n-1.
* the rise at site i is the maximal ascending run of marks ending at slot i-1,
  its length counted in slots and clipped at the interval edge; rise length 0
  at i=1 (no slots on the left).
* the descent at site i is the maximal descending run starting at slot i;
  descent length 0 at i=n.
* site i is vacant at jamming iff both its rise and descent have even length.
* tie-breaking: equal marks are ordered by slot index (left slot acts first),
  so an adjacent comparison "left before right" is mark_left <= mark_right.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_SEED, ParkingConfiguration, PriorityField, SeedSpec
from .stats import SampleStats


@dataclass(frozen=True)
class JammedOutcome:
    """Result of running one interval to jamming.

    T is the number of uniform draws up to and including the jamming one; it is
    None for the priority-field construction, which has no rejected attempts.
    per_car_times maps occupied 1-based sites to the mark of their car's slot
    (timed construction only).
    """

    config: ParkingConfiguration
    M: int
    T: int | None = None
    per_car_times: dict | None = None


@dataclass(frozen=True)
class RiseDescent:
    """Run lengths around one site; the site is vacant iff both are even."""

    site: int
    rise_length: int
    descent_length: int

    @property
    def vacant(self) -> bool:
        return self.rise_length % 2 == 0 and self.descent_length % 2 == 0


def _values_of(xi) -> np.ndarray:
    if isinstance(xi, PriorityField):
        if xi.index_offset != 1:
            raise ValueError("finite classification expects a field over slots 1..n-1")
        return xi.values
    return np.asarray(xi, dtype=np.float64)


def rise_descent_at(xi, i: int) -> RiseDescent:
    """Rise and descent lengths at 1-based site i for marks over slots 1..n-1."""
    v = _values_of(xi)
    m = v.size
    n = m + 1
    if not 1 <= i <= n:
        raise ValueError(f"site {i} outside 1..{n}")
    if i == 1:
        rise = 0
    else:
        r = i - 1  # 1-based slot where the ascending run ends
        while r >= 2 and v[r - 2] <= v[r - 1]:
            r -= 1
        rise = i - r
    if i == n:
        descent = 0
    else:
        e = i
        while e <= m - 1 and not v[e - 1] <= v[e]:
            e += 1
        descent = e - i + 1
    return RiseDescent(site=i, rise_length=rise, descent_length=descent)


def classify_site(xi, i: int) -> bool:
    """True when site i is occupied at jamming, by the run-parity rule."""
    return not rise_descent_at(xi, i).vacant


def occupancy_profile(values: np.ndarray) -> np.ndarray:
    """Vectorised run-parity classification of every site.

    values has shape (..., n-1) with marks along the last axis; the result is a
    boolean occupancy array of shape (..., n). Agrees with classify_site and
    with replaying the construction (tested exhaustively for small n).
    """
    v = np.asarray(values, dtype=np.float64)
    m = v.shape[-1]
    if m < 1:
        raise ValueError("need at least one slot")
    asc = v[..., :-1] <= v[..., 1:]
    idx = np.arange(m)

    # start of the maximal ascending run ending at each slot
    brk = np.empty(v.shape[:-1] + (m,), dtype=bool)
    brk[..., 0] = True
    brk[..., 1:] = ~asc
    run_start = np.maximum.accumulate(np.where(brk, idx, 0), axis=-1)

    # end of the maximal descending run starting at each slot
    dbrk = np.empty_like(brk)
    dbrk[..., m - 1] = True
    dbrk[..., : m - 1] = asc
    run_end = np.minimum.accumulate(np.where(dbrk, idx, m - 1)[..., ::-1], axis=-1)[..., ::-1]

    rise = np.zeros(v.shape[:-1] + (m + 1,), dtype=np.int64)
    rise[..., 1:] = np.arange(1, m + 1) - run_start
    descent = np.zeros_like(rise)
    descent[..., :m] = run_end - idx + 1
    return (rise % 2 == 1) | (descent % 2 == 1)


def construct_from_priorities(xi: PriorityField, timed: bool = False) -> JammedOutcome:
    """Park cars in increasing mark order; the result is always jammed.

    With timed=True, per_car_times records for every occupied site the mark of
    the slot whose car covers it (the arrival time when marks are arrival
    times)."""
    v = _values_of(xi)
    m = v.size
    n = m + 1
    occ = np.zeros(n, dtype=bool)
    times: dict | None = {} if timed else None
    order = np.argsort(v, kind="stable")
    for s in order:
        if not occ[s] and not occ[s + 1]:
            occ[s] = True
            occ[s + 1] = True
            if timed:
                t = float(v[s])
                times[int(s) + 1] = t
                times[int(s) + 2] = t
    config = ParkingConfiguration(occ)
    assert config.jammed, "processing every slot must jam the interval"
    return JammedOutcome(config=config, M=config.occupied_count, T=None, per_car_times=times)


def car_slots_from_occupancy(occ: np.ndarray) -> np.ndarray:
    """0-based slots holding cars, recovered from a jammed occupancy.

    Maximal occupied runs have even length and a unique perfect matching, so
    the car positions are forced: every other site from each run's start."""
    occ = np.asarray(occ, dtype=bool)
    idx = np.arange(occ.size)
    run_start = occ & np.concatenate(([True], ~occ[:-1]))
    last_start = np.maximum.accumulate(np.where(run_start, idx, 0))
    on_car_start = occ & ((idx - last_start) % 2 == 0)
    return idx[on_car_start]


def simulate_direct(n: int, rng: np.random.Generator | SeedSpec | None = None) -> JammedOutcome:
    """Run the uniform-draw process on n sites until jamming.

    Each draw picks a slot uniformly from 1..n-1; the car parks iff both sites
    are free. T counts every draw, rejections included. The free-pair counter
    is maintained incrementally and cross-checked on exit."""
    if n < 2:
        raise ValueError("need n >= 2 sites")
    if rng is None:
        rng = SeedSpec(DEFAULT_SEED).generator()
    elif isinstance(rng, SeedSpec):
        rng = rng.generator()
    occ = np.zeros(n, dtype=bool)
    free_pairs = n - 1
    t = 0
    m = 0
    while free_pairs > 0:
        s = int(rng.integers(0, n - 1))  # 0-based slot
        t += 1
        if not occ[s] and not occ[s + 1]:
            lost = 1
            if s >= 1 and not occ[s - 1]:
                lost += 1
            if s + 2 <= n - 1 and not occ[s + 2]:
                lost += 1
            occ[s] = True
            occ[s + 1] = True
            free_pairs -= lost
            m += 2
    config = ParkingConfiguration(occ, free_pair_count=0)
    return JammedOutcome(config=config, M=m, T=t)


def simulate_direct_batch(
    n: int, replicas: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised uniform-draw process across replicas; returns (M, T) arrays.

    All live replicas draw one slot per step; jammed replicas stop drawing.
    Exactly the law of simulate_direct, batched for throughput."""
    if n < 2:
        raise ValueError("need n >= 2 sites")
    occ = np.zeros(replicas * n, dtype=bool)  # flat (replica, site)
    fpc = np.full(replicas, n - 1, dtype=np.int64)
    t_cnt = np.zeros(replicas, dtype=np.int64)
    m_cnt = np.zeros(replicas, dtype=np.int64)
    active = np.arange(replicas)
    while active.size:
        s = rng.integers(0, n - 1, size=active.size)
        t_cnt[active] += 1
        base = active * n + s
        can = ~occ[base] & ~occ[base + 1]
        if can.any():
            rows = active[can]
            ps = s[can]
            pbase = rows * n + ps
            lost = np.ones(rows.size, dtype=np.int64)
            lost += (ps >= 1) & ~occ[np.maximum(pbase - 1, 0)]
            lost += (ps <= n - 3) & ~occ[np.minimum(pbase + 2, occ.size - 1)]
            occ[pbase] = True
            occ[pbase + 1] = True
            fpc[rows] -= lost
            m_cnt[rows] += 2
        active = active[fpc[active] > 0]
    return m_cnt, t_cnt


def sample_M_batch(n: int, replicas: int, rng: np.random.Generator) -> np.ndarray:
    """M samples from the priority-field construction via the vectorised
    classifier. Occupancy depends on the marks only through their ordering, so
    raw uniforms serve as marks."""
    u = rng.random((replicas, n - 1))
    return occupancy_profile(u).sum(axis=1)


@dataclass(frozen=True)
class MeasuredMT:
    """Replica statistics of M (and T when the method provides draws)."""

    n: int
    method: str
    m_stats: SampleStats
    t_stats: SampleStats | None


def measure_M_T(
    n: int,
    replicas: int,
    seed: int | SeedSpec = DEFAULT_SEED,
    method: str = "direct",
) -> MeasuredMT:
    """Aggregate independent jamming replicas.

    method "direct" runs the genuine uniform-draw process and reports M and T;
    method "priorities" uses the classifier fast path and reports M only."""
    if replicas < 2:
        raise ValueError("need at least 2 replicas")
    spec = seed if isinstance(seed, SeedSpec) else SeedSpec(seed)
    rng = spec.generator()
    if method == "direct":
        m, t = simulate_direct_batch(n, replicas, rng)
        return MeasuredMT(
            n=n,
            method=method,
            m_stats=SampleStats.from_samples(m),
            t_stats=SampleStats.from_samples(t),
        )
    if method == "priorities":
        m = sample_M_batch(n, replicas, rng)
        return MeasuredMT(n=n, method=method, m_stats=SampleStats.from_samples(m), t_stats=None)
    raise ValueError(f"unknown method {method!r}")
