"""Trial counting through Poissonization.

Give every slot its own unit-rate Poisson arrival stream. The first arrivals
xi^1 form the priority field, so the jammed configuration and all per-site
arrival times come from the usual construction; tau* is the last parking time.
The total number of arrivals up to tau*, summed over the n-1 slots, has exactly
the law of T_n, the number of uniform draws (rejections included) the direct
process needs to jam: merging the streams reproduces i.i.d. uniform slot picks.
T_n grows like n log n; a coupon collector over the n-1 slots dominates it.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_SEED, EXP, SeedSpec, sample_priority_field
from .finite import car_slots_from_occupancy, construct_from_priorities, occupancy_profile
from .stats import MCEstimate, SampleStats


@dataclass(frozen=True, eq=False)
class TrialOutcome:
    """One Poissonized replica: jamming time tau*, total arrival count T, and
    optionally the per-slot counts (0-based slots)."""

    n: int
    tau_star: float
    T: int
    per_slot_counts: np.ndarray | None = None


def simulate_poissonized(
    n: int,
    rng: np.random.Generator | SeedSpec | None = None,
    keep_counts: bool = False,
) -> TrialOutcome:
    """Event-level Poissonized replica.

    The first arrivals are used as the priority field (timed construction),
    tau* is the largest parking time, and each slot then accumulates further
    exponential gaps until its arrival sum would pass tau*."""
    if n < 2:
        raise ValueError("need n >= 2 sites")
    if rng is None:
        rng = SeedSpec(DEFAULT_SEED).generator()
    elif isinstance(rng, SeedSpec):
        rng = rng.generator()
    field = sample_priority_field(n, EXP, rng)
    outcome = construct_from_priorities(field, timed=True)
    tau_star = max(outcome.per_car_times.values())
    counts = np.zeros(n - 1, dtype=np.int64)
    for s in range(n - 1):
        acc = float(field.values[s])
        while acc <= tau_star:
            counts[s] += 1
            acc += float(rng.standard_exponential())
    return TrialOutcome(
        n=n,
        tau_star=tau_star,
        T=int(counts.sum()),
        per_slot_counts=counts if keep_counts else None,
    )


def _tau_star_fast(n: int, rng: np.random.Generator) -> tuple[float, np.ndarray]:
    """tau* and the first-arrival vector, via the vectorised classifier.

    Car slots are recovered from the unique matching of the jammed occupancy,
    and tau* is the largest mark among them."""
    xi = rng.standard_exponential(n - 1)
    occ = occupancy_profile(xi)
    slots = car_slots_from_occupancy(occ)
    return float(xi[slots].max()), xi


def _poissonized_fast(n: int, rng: np.random.Generator) -> TrialOutcome:
    """Replica kernel for large n: same law as simulate_poissonized, with the
    per-slot counting done in vectorised rounds of exponential gaps."""
    tau_star, xi = _tau_star_fast(n, rng)
    cum = xi.copy()
    alive = np.flatnonzero(cum <= tau_star)
    total = 0
    while alive.size:
        total += alive.size
        cum[alive] += rng.standard_exponential(alive.size)
        alive = alive[cum[alive] <= tau_star]
    return TrialOutcome(n=n, tau_star=tau_star, T=total)


def _replica_specs(master_seed: int | SeedSpec, count: int, offset: int = 0) -> list[SeedSpec]:
    master = master_seed.master_seed if isinstance(master_seed, SeedSpec) else int(master_seed)
    return [SeedSpec(master, offset + i) for i in range(count)]


def _map_replicas(fn, specs: list[SeedSpec], threads: int) -> list:
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, specs))
    return [fn(s) for s in specs]


@dataclass(frozen=True)
class TauStarStats:
    """Replica statistics of the jamming time tau*."""

    n: int
    stats: SampleStats
    quantiles: dict


def tau_star_statistics(
    n: int,
    replicas: int,
    seed: int | SeedSpec = DEFAULT_SEED,
    threads: int = 1,
) -> TauStarStats:
    specs = _replica_specs(seed, replicas)
    taus = np.array(_map_replicas(lambda sp: _tau_star_fast(n, sp.generator())[0], specs, threads))
    qs = (0.05, 0.25, 0.5, 0.75, 0.95)
    return TauStarStats(
        n=n,
        stats=SampleStats.from_samples(taus),
        quantiles={q: float(np.quantile(taus, q)) for q in qs},
    )


@dataclass(frozen=True)
class TrialsRow:
    """One row of the trial-count sweep."""

    n: int
    replicas: int
    mean_T: float
    stderr_T: float
    ratio: float  # mean T / (n log n)
    ratio_stderr: float
    tau_star_mean: float
    coupon_mean: float  # exact (n-1) H_{n-1}

    @property
    def dominated_by_coupon(self) -> bool:
        return self.mean_T <= self.coupon_mean + 3.0 * self.stderr_T


def coupon_collector_mean_exact(k: int) -> float:
    """Exact mean draws to collect k coupons: k * H_k."""
    if k < 1:
        raise ValueError("need k >= 1")
    return k * float(np.sum(1.0 / np.arange(1, k + 1)))


def trials_ratio_sweep(
    n_list,
    replicas: int,
    seed: int | SeedSpec = DEFAULT_SEED,
    threads: int = 1,
) -> list[TrialsRow]:
    """Mean T_n against n log n for each n, with per-replica RNG streams.

    Stream indices are globally distinct across rows, so rows are independent
    and any row subset reproduces bit-identically."""
    rows = []
    offset = 0
    for n in n_list:
        specs = _replica_specs(seed, replicas, offset)
        offset += replicas
        outs = _map_replicas(lambda sp: _poissonized_fast(n, sp.generator()), specs, threads)
        t = np.array([o.T for o in outs], dtype=np.float64)
        taus = np.array([o.tau_star for o in outs])
        st = SampleStats.from_samples(t)
        scale = n * math.log(n)
        rows.append(
            TrialsRow(
                n=n,
                replicas=replicas,
                mean_T=st.mean,
                stderr_T=st.stderr,
                ratio=st.mean / scale,
                ratio_stderr=st.stderr / scale,
                tau_star_mean=float(taus.mean()),
                coupon_mean=coupon_collector_mean_exact(n - 1),
            )
        )
    return rows


def coupon_collector_mc(
    k: int,
    replicas: int,
    seed: int | SeedSpec = DEFAULT_SEED,
) -> MCEstimate:
    """Monte Carlo mean of the coupon-collector completion draw count.

    Samples the exact law stage by stage: after j distinct coupons the wait for
    a new one is Geometric((k-j)/k), independent across stages."""
    if k < 1:
        raise ValueError("need k >= 1")
    spec = seed if isinstance(seed, SeedSpec) else SeedSpec(seed)
    rng = spec.generator()
    totals = np.zeros(replicas, dtype=np.int64)
    for j in range(k):
        totals += rng.geometric((k - j) / k, size=replicas)
    st = SampleStats.from_samples(totals)
    return MCEstimate(estimate=st.mean, stderr=st.stderr, replicas=replicas)
