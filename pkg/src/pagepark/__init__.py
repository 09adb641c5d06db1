"""Dimer random sequential adsorption on intervals and on the integer line.

Cars of length two park at uniformly random slots of {1, ..., n}, each attempt
succeeding iff both covered sites are free; the process runs to jamming. The
package provides exact finite-n analytics (mean, full law, per-site vacancy,
expected draw counts), fast Monte Carlo simulators for the finite and infinite
versions of the process, a brute-force enumeration oracle for small n, and a
CLI harness that emits deterministic experiment tables.
"""

from .core import (
    DEFAULT_SEED,
    EXP,
    SEED_ENV_VAR,
    UNIFORM,
    ArrivalDistribution,
    ParkingConfiguration,
    PriorityField,
    SeedSpec,
    recount_free_pairs,
    sample_priority_field,
)
from .exact import (
    ExactTable,
    MDistribution,
    density_curve_closed_form,
    distribution_M,
    exact_table,
    expected_M,
    expected_M_series,
    inv_e_fraction,
    limit_constants,
    odd_descent_prob_closed_form,
    partial_sum_S,
    per_site_vacancy_exact,
    per_site_vacancy_float,
    site_coupling_bound,
)
from .finite import (
    JammedOutcome,
    MeasuredMT,
    RiseDescent,
    car_slots_from_occupancy,
    classify_site,
    construct_from_priorities,
    measure_M_T,
    occupancy_profile,
    rise_descent_at,
    sample_M_batch,
    simulate_direct,
    simulate_direct_batch,
)
from .infinite import (
    AutocovEstimate,
    RareEventCapError,
    RunsSample,
    WindowSample,
    autocovariance_mc,
    density_at_time_mc,
    odd_descent_time_prob_mc,
    sample_runs,
    sample_site_infinite,
    vacancy_mc,
)
from .oracle import (
    CHAIN_CAP,
    ENUMERATION_CAP,
    OracleReport,
    enumerate_orderings,
    expected_T_exact,
    verify_lemma1,
)
from .stats import (
    MCEstimate,
    SampleStats,
    chi_square_two_sample,
    ks_distance,
    proportion_estimate,
)
from .trials import (
    TauStarStats,
    TrialOutcome,
    TrialsRow,
    coupon_collector_mc,
    coupon_collector_mean_exact,
    simulate_poissonized,
    tau_star_statistics,
    trials_ratio_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "ArrivalDistribution",
    "AutocovEstimate",
    "CHAIN_CAP",
    "DEFAULT_SEED",
    "ENUMERATION_CAP",
    "EXP",
    "ExactTable",
    "JammedOutcome",
    "MCEstimate",
    "MDistribution",
    "MeasuredMT",
    "OracleReport",
    "ParkingConfiguration",
    "PriorityField",
    "RareEventCapError",
    "RiseDescent",
    "RunsSample",
    "SEED_ENV_VAR",
    "SampleStats",
    "SeedSpec",
    "TauStarStats",
    "TrialOutcome",
    "TrialsRow",
    "UNIFORM",
    "WindowSample",
    "autocovariance_mc",
    "car_slots_from_occupancy",
    "chi_square_two_sample",
    "classify_site",
    "construct_from_priorities",
    "coupon_collector_mc",
    "coupon_collector_mean_exact",
    "density_at_time_mc",
    "density_curve_closed_form",
    "distribution_M",
    "enumerate_orderings",
    "exact_table",
    "expected_M",
    "expected_M_series",
    "expected_T_exact",
    "inv_e_fraction",
    "ks_distance",
    "limit_constants",
    "measure_M_T",
    "occupancy_profile",
    "odd_descent_prob_closed_form",
    "odd_descent_time_prob_mc",
    "partial_sum_S",
    "per_site_vacancy_exact",
    "per_site_vacancy_float",
    "proportion_estimate",
    "recount_free_pairs",
    "rise_descent_at",
    "sample_M_batch",
    "sample_priority_field",
    "sample_runs",
    "sample_site_infinite",
    "simulate_direct",
    "simulate_direct_batch",
    "simulate_poissonized",
    "site_coupling_bound",
    "tau_star_statistics",
    "trials_ratio_sweep",
    "vacancy_mc",
    "verify_lemma1",
]
