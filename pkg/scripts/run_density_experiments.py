#!/usr/bin/env python3
"""Density experiments: E[M_n]/n convergence and the time-resolved curve.

Reproduces the two headline density tables. Exact values come from the
rational/float recursion; Monte Carlo columns use the direct uniform-draw
process (finite n) and the outward-growth sampler (infinite line).
"""
import argparse
import math

from pagepark import (
    SeedSpec,
    density_at_time_mc,
    density_curve_closed_form,
    expected_M_series,
    limit_constants,
    measure_M_T,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-list", default="10,100,1000,10000")
    ap.add_argument("--t-grid", default="0.25,0.5,1,2,4")
    ap.add_argument("--replicas", type=int, default=20_000)
    ap.add_argument("--seed", type=int, default=42424242)
    args = ap.parse_args()

    n_list = [int(x) for x in args.n_list.split(",")]
    rho = limit_constants()["jamming_density"]
    series = expected_M_series(max(n_list))

    print(f"# jammed density vs n   (limit 1 - e^-2 = {rho:.10f})")
    print(f"{'n':>8} {'exact E[M]/n':>15} {'mc mean':>12} {'mc stderr':>12} {'n*gap':>10}")
    for idx, n in enumerate(n_list):
        mt = measure_M_T(n, args.replicas, seed=SeedSpec(args.seed, idx))
        em = float(series[n])
        print(
            f"{n:>8} {em / n:>15.10f} {mt.m_stats.mean / n:>12.8f} "
            f"{mt.m_stats.stderr / n:>12.2e} {em - n * rho:>10.5f}"
        )
    print()

    t_grid = [float(x) for x in args.t_grid.split(",")]
    closed = density_curve_closed_form(t_grid)
    est = density_at_time_mc(t_grid, args.replicas, seed=SeedSpec(args.seed, 1000))
    print("# site occupancy at time t on the line   (closed form 1 - e^{-2F(t)})")
    print(f"{'t':>6} {'closed':>12} {'mc':>12} {'stderr':>10} {'z':>7}")
    for t, c, e in zip(t_grid, closed, est):
        z = (e.estimate - c) / e.stderr if e.stderr else math.nan
        print(f"{t:>6.2f} {c:>12.8f} {e.estimate:>12.8f} {e.stderr:>10.2e} {z:>7.2f}")


if __name__ == "__main__":
    main()
