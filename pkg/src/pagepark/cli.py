"""Command-line harness around the dimer parking library.

Each subcommand runs a self-contained experiment, writes one table
(CSV or a JSON envelope) to stdout or --out, and validates its own
in-run consistency checks.  Exit status is 0 iff every check passed.
Progress and check diagnostics go to stderr; stdout carries data only.

Determinism: for a fixed seed and flag set the emitted bytes are
identical across re-runs and across --threads settings.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

from .core import DEFAULT_SEED, SEED_ENV_VAR, ArrivalDistribution, SeedSpec
from .exact import (
    DISTRIBUTION_RATIONAL_CAP,
    density_curve_closed_form,
    expected_M,
    expected_M_series,
    limit_constants,
    per_site_vacancy_exact,
    per_site_vacancy_float,
    site_coupling_bound,
)
from .finite import classify_site, measure_M_T
from .infinite import autocovariance_mc, density_at_time_mc
from .oracle import ENUMERATION_CAP, enumerate_orderings, expected_T_exact, verify_lemma1
from .trials import trials_ratio_sweep

__all__ = ["RunConfig", "ResultRow", "build_parser", "main"]

# A result row is an ordered mapping; insertion order fixes the CSV
# column order and the JSON key order.
ResultRow = dict


@dataclass(frozen=True)
class RunConfig:
    """Parsed invocation, echoed into the JSON envelope."""

    command: str
    seed: int
    fmt: str
    out: str | None
    threads: int
    params: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        # threads is an execution detail, not an experiment parameter; keeping
        # it out of the envelope makes output bytes independent of --threads
        d = {"seed": self.seed}
        d.update(self.params)
        return d


@dataclass
class CheckLog:
    """Accumulates named pass/fail checks for one run."""

    entries: list = field(default_factory=list)

    def record(self, name: str, ok: bool, detail: str) -> None:
        self.entries.append({"name": name, "passed": bool(ok), "detail": detail})
        status = "ok" if ok else "FAIL"
        print(f"check[{status}] {name}: {detail}", file=sys.stderr)

    @property
    def all_passed(self) -> bool:
        return all(e["passed"] for e in self.entries)

    def as_dict(self) -> dict:
        return {"passed": self.all_passed, "entries": self.entries}


def _fmt_value(x: Any) -> str:
    """CSV cell rendering: floats at 10 significant digits, exact
    rationals as p/q, the rest via str()."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x, ".10g")
    return str(x)


def _json_value(x: Any) -> Any:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def emit(rows: Sequence[ResultRow], config: RunConfig, checks: CheckLog) -> None:
    if config.fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if rows:
            writer.writerow(list(rows[0].keys()))
            for row in rows:
                writer.writerow([_fmt_value(v) for v in row.values()])
        text = buf.getvalue()
    else:
        doc = {
            "command": config.command,
            "config": config.as_dict(),
            "rows": [{k: _json_value(v) for k, v in row.items()} for row in rows],
            "checks": checks.as_dict(),
        }
        text = json.dumps(doc, indent=2, sort_keys=False) + "\n"
    if config.out is None:
        sys.stdout.write(text)
    else:
        with open(config.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _parse_int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _parse_float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


# ---------------------------------------------------------------------------
# subcommands


def cmd_density_convergence(args: argparse.Namespace) -> tuple[list, CheckLog, dict]:
    n_list = sorted(set(_parse_int_list(args.n_list)))
    if not n_list or n_list[0] < 2:
        raise SystemExit("density-convergence: n values must be >= 2")
    rho = limit_constants()["jamming_density"]
    series = expected_M_series(n_list[-1]) if n_list[-1] > DISTRIBUTION_RATIONAL_CAP else None
    checks = CheckLog()
    rows: list[ResultRow] = []
    for idx, n in enumerate(n_list):
        exact: Fraction | float
        if n <= DISTRIBUTION_RATIONAL_CAP:
            exact = expected_M(n)
            em = float(exact)
        else:
            em = float(series[n])
            exact = em
        print(f"density-convergence: n={n} ({args.replicas} replicas)", file=sys.stderr)
        mt = measure_M_T(n, args.replicas, seed=SeedSpec(args.seed, idx))
        density_gap = abs(em / n - rho)
        rows.append(
            ResultRow(
                n=n,
                expected_m=exact,
                expected_m_over_n=em / n,
                mc_mean_over_n=mt.m_stats.mean / n,
                mc_stderr_over_n=mt.m_stats.stderr / n,
                replicas=args.replicas,
                abs_gap_to_limit=density_gap,
                density_bound=12.0 / n,
            )
        )
        checks.record(
            f"gap_bound_n{n}",
            density_gap <= 12.0 / n + 1e-12,
            f"|E[M_n]/n - (1-e^-2)| = {density_gap:.3e} <= 12/n = {12.0 / n:.3e}",
        )
        band = 5.0 * mt.m_stats.stderr if mt.m_stats.stderr > 0 else 1e-9
        checks.record(
            f"mc_agrees_n{n}",
            abs(mt.m_stats.mean - em) <= band,
            f"MC mean {mt.m_stats.mean:.6f} vs exact {em:.6f} within 5 stderr",
        )
    params = {"n_list": n_list, "replicas": args.replicas}
    return rows, checks, params


def cmd_density_curve(args: argparse.Namespace) -> tuple[list, CheckLog, dict]:
    t_grid = _parse_float_list(args.t_grid)
    if not t_grid or any(t < 0 for t in t_grid):
        raise SystemExit("density-curve: t values must be nonnegative")
    dist = ArrivalDistribution(args.dist)
    closed_arr = density_curve_closed_form(t_grid, dist=dist)
    print(
        f"density-curve: {len(t_grid)} points, {args.replicas} replicas", file=sys.stderr
    )
    est = density_at_time_mc(
        t_grid,
        args.replicas,
        seed=SeedSpec(args.seed, 0),
        dist=dist,
        threads=args.threads,
    )
    checks = CheckLog()
    rows: list[ResultRow] = []
    for t, closed, mc in zip(t_grid, closed_arr, est):
        closed = float(closed)
        diff = abs(mc.estimate - closed)
        rows.append(
            ResultRow(
                t=t,
                closed_form=closed,
                mc_estimate=mc.estimate,
                mc_stderr=mc.stderr,
                abs_diff=diff,
                replicas=args.replicas,
            )
        )
        band = 4.0 * mc.stderr if mc.stderr > 0 else 1e-9
        checks.record(
            f"curve_t{t:g}",
            diff <= band,
            f"|MC - closed| = {diff:.3e} <= 4 stderr = {band:.3e}",
        )
    params = {"t_grid": t_grid, "replicas": args.replicas, "dist": args.dist}
    return rows, checks, params


def cmd_trials(args: argparse.Namespace) -> tuple[list, CheckLog, dict]:
    n_list = _parse_int_list(args.n_list)
    if not n_list or any(n < 2 for n in n_list):
        raise SystemExit("trials: n values must be >= 2")
    checks = CheckLog()
    print(
        f"trials: n in {n_list}, {args.replicas} replicas each", file=sys.stderr
    )
    sweep = trials_ratio_sweep(
        n_list,
        args.replicas,
        seed=args.seed,
        threads=args.threads,
    )
    rows: list[ResultRow] = []
    for r in sweep:
        rows.append(
            ResultRow(
                n=r.n,
                replicas=r.replicas,
                mean_t=r.mean_T,
                stderr_t=r.stderr_T,
                ratio=r.ratio,
                ratio_stderr=r.ratio_stderr,
                tau_star_mean=r.tau_star_mean,
                coupon_mean=r.coupon_mean,
                dominated_by_coupon=r.dominated_by_coupon,
            )
        )
        checks.record(
            f"coupon_dominates_n{r.n}",
            r.dominated_by_coupon,
            f"mean T = {r.mean_T:.1f} <= coupon mean {r.coupon_mean:.1f} (+3 stderr)",
        )
    increasing_n = all(a < b for a, b in zip(n_list, n_list[1:]))
    if increasing_n and len(sweep) >= 2 and args.replicas >= 30:
        for a, b in zip(sweep, sweep[1:]):
            slack = 3.0 * math.hypot(a.ratio_stderr, b.ratio_stderr)
            checks.record(
                f"ratio_nondecreasing_n{a.n}_to_n{b.n}",
                b.ratio >= a.ratio - slack,
                f"ratio {a.ratio:.4f} -> {b.ratio:.4f} (slack {slack:.4f})",
            )
    params = {"n_list": n_list, "replicas": args.replicas}
    return rows, checks, params


def cmd_oracle(args: argparse.Namespace) -> tuple[list, CheckLog, dict]:
    n = args.n
    if not 2 <= n <= ENUMERATION_CAP:
        raise SystemExit(
            f"oracle: exhaustive enumeration supports 2 <= n <= {ENUMERATION_CAP} (got {n})"
        )
    checks = CheckLog()
    print(f"oracle: replaying all {math.factorial(n - 1)} orderings", file=sys.stderr)
    report = enumerate_orderings(n)
    analytic = expected_M(n)
    checks.record(
        "expected_m_matches_recursion",
        report.expected_M == analytic,
        f"enumeration {report.expected_M} == recursion {analytic}",
    )
    mean_from_dist = sum(m * p for m, p in report.distribution_M.items())
    checks.record(
        "distribution_mean_identity",
        mean_from_dist == report.expected_M,
        f"sum m*P(M=m) = {mean_from_dist}",
    )
    analytic_vac = tuple(per_site_vacancy_exact(n, i) for i in range(1, n + 1))
    checks.record(
        "per_site_vacancy_matches_closed_form",
        report.per_site_vacancy == analytic_vac,
        f"{n} sites compared exactly",
    )
    vac_sum = sum(report.per_site_vacancy, Fraction(0))
    checks.record(
        "vacancy_complements_occupancy",
        vac_sum + report.expected_M == n,
        f"sum vacancy {vac_sum} + E[M] {report.expected_M} == n",
    )
    chain_T = expected_T_exact(n)
    checks.record(
        "expected_t_matches_chain",
        report.expected_T == chain_T,
        f"enumeration {report.expected_T} == absorbing chain {chain_T}",
    )
    if n <= 9:
        bad = verify_lemma1(n, classify_site)
        checks.record(
            "parity_classification_matches_dynamics",
            len(bad) == 0,
            f"{len(bad)} counterexamples over all {report.permutations} orderings",
        )
    else:
        print(
            "note: parity classification sweep skipped for n > 9 (runtime)",
            file=sys.stderr,
        )
    rows = [
        ResultRow(
            n=report.n,
            permutations=report.permutations,
            expected_m=report.expected_M,
            expected_t=report.expected_T,
            distribution_m={
                str(k): _json_value(v) for k, v in sorted(report.distribution_M.items())
            },
            per_site_vacancy=[_json_value(v) for v in report.per_site_vacancy],
        )
    ]
    params = {"n": n}
    return rows, checks, params


def cmd_site_vacancy(args: argparse.Namespace) -> tuple[list, CheckLog, dict]:
    n = args.n
    if n < 2:
        raise SystemExit("site-vacancy: n must be >= 2")
    checks = CheckLog()
    use_exact = n <= DISTRIBUTION_RATIONAL_CAP
    if use_exact:
        vac: list = [per_site_vacancy_exact(n, i) for i in range(1, n + 1)]
    else:
        vac = [per_site_vacancy_float(n, i) for i in range(1, n + 1)]
    rows: list[ResultRow] = []
    for i, v in enumerate(vac, start=1):
        rows.append(
            ResultRow(
                site=i,
                vacancy=v,
                vacancy_float=float(v),
                coupling_bound=site_coupling_bound(n, i),
            )
        )
    sym = all(vac[i] == vac[n - 1 - i] for i in range(n))
    checks.record("profile_symmetric", sym, "v(i) == v(n+1-i) for all sites")
    if use_exact:
        total = sum(vac, Fraction(0))
        em = expected_M(n)
        checks.record(
            "vacancy_complements_occupancy",
            total + em == n,
            f"sum vacancy {total} + E[M] {em} == n (exact)",
        )
    else:
        total = math.fsum(vac)
        em = float(expected_M_series(n)[n])
        checks.record(
            "vacancy_complements_occupancy",
            abs(total + em - n) <= 1e-8 * n,
            f"sum vacancy {total:.6f} + E[M] {em:.6f} == n to 1e-8 relative",
        )
    lim = limit_constants()["vacancy"]
    mid_site = (n + 1) // 2
    mid = float(vac[mid_site - 1])
    bound = site_coupling_bound(n, mid_site)
    checks.record(
        "centre_near_limit",
        abs(mid - lim) <= bound + 1e-12,
        f"|v(mid) - e^-2| = {abs(mid - lim):.3e} <= {bound:.3e}",
    )
    params = {"n": n}
    return rows, checks, params


def cmd_autocovariance(args: argparse.Namespace) -> tuple[list, CheckLog, dict]:
    k_list = _parse_int_list(args.k_list)
    if not k_list or any(k < 0 for k in k_list):
        raise SystemExit("autocovariance: lags must be nonnegative")
    checks = CheckLog()
    rows: list[ResultRow] = []
    vac = limit_constants()["vacancy"]
    for idx, k in enumerate(k_list):
        print(f"autocovariance: lag {k} ({args.replicas} pairs)", file=sys.stderr)
        est = autocovariance_mc(
            k,
            args.replicas,
            seed=SeedSpec(args.seed, idx),
            threads=args.threads,
        )
        rows.append(
            ResultRow(
                lag=k,
                autocovariance=est.estimate,
                stderr=est.stderr,
                mean_site_0=est.mean_site_0,
                mean_site_k=est.mean_site_k,
                replicas=est.replicas,
            )
        )
        band = 5.0 * est.stderr if est.stderr > 0 else 1e-9
        if k == 0:
            var = vac * (1.0 - vac)
            checks.record(
                "lag0_is_bernoulli_variance",
                abs(est.estimate - var) <= band,
                f"cov(0) = {est.estimate:.6f} vs e^-2(1-e^-2) = {var:.6f}",
            )
        elif k >= 30:
            checks.record(
                f"lag{k}_decorrelated",
                abs(est.estimate) <= band,
                f"|cov({k})| = {abs(est.estimate):.3e} <= 5 stderr = {band:.3e}",
            )
    params = {"k_list": k_list, "replicas": args.replicas}
    return rows, checks, params


# ---------------------------------------------------------------------------
# parser wiring


def _default_seed() -> int:
    env_seed = os.environ.get(SEED_ENV_VAR)
    return int(env_seed) if env_seed else DEFAULT_SEED


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None,
                   help=f"master seed (default {DEFAULT_SEED}; env {SEED_ENV_VAR})")
    p.add_argument("--format", dest="fmt", choices=("csv", "json"), default=None,
                   help="output format (default csv; oracle is json-only)")
    p.add_argument("--out", default=None, metavar="PATH",
                   help="write the table to PATH instead of stdout")
    p.add_argument("--threads", type=int, default=1, metavar="K",
                   help="worker threads for the Monte Carlo kernels (default 1; "
                        "output is independent of K)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pagepark",
        description="Dimer random sequential adsorption: exact tables "
                    "and Monte Carlo experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("density-convergence",
                       help="E[M_n]/n versus the jamming limit 1 - e^-2")
    p.add_argument("--n-list", default="10,100,1000,10000",
                   help="comma-separated interval sizes")
    p.add_argument("--replicas", type=int, default=10_000,
                   help="Monte Carlo replicas per n (default 10000)")
    _add_common(p)
    p.set_defaults(run=cmd_density_convergence)

    p = sub.add_parser("density-curve",
                       help="time-resolved density versus 1 - e^{-2F(t)}")
    p.add_argument("--t-grid", default="0.25,0.5,1,2,4",
                   help="comma-separated time points")
    p.add_argument("--replicas", type=int, default=100_000,
                   help="Monte Carlo replicas (default 100000)")
    p.add_argument("--dist", choices=("exp", "uniform"), default="exp",
                   help="arrival mark distribution (default exp)")
    _add_common(p)
    p.set_defaults(run=cmd_density_curve)

    p = sub.add_parser("trials",
                       help="total draws T_n against the n log n scale")
    p.add_argument("--n-list", default="1000,10000,100000,1000000",
                   help="comma-separated interval sizes")
    p.add_argument("--replicas", type=int, default=100,
                   help="replicas per n (default 100)")
    _add_common(p)
    p.set_defaults(run=cmd_trials)

    p = sub.add_parser("oracle",
                       help="exhaustive small-n enumeration report (JSON)")
    p.add_argument("--n", type=int, default=6, help="interval size (2..10)")
    _add_common(p)
    p.set_defaults(run=cmd_oracle)

    p = sub.add_parser("site-vacancy",
                       help="exact per-site vacancy profile")
    p.add_argument("--n", type=int, default=20, help="interval size (>= 2)")
    _add_common(p)
    p.set_defaults(run=cmd_site_vacancy)

    p = sub.add_parser("autocovariance",
                       help="jammed-state occupancy autocovariance on the line")
    p.add_argument("--n-list", "--k-list", dest="k_list",
                   default="0,1,2,3,5,8,13,21,34",
                   help="comma-separated lags")
    p.add_argument("--replicas", type=int, default=200_000,
                   help="site pairs per lag (default 200000)")
    _add_common(p)
    p.set_defaults(run=cmd_autocovariance)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is None:
        args.seed = _default_seed()
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    if args.command == "oracle":
        # the report is nested (distribution, profile); csv would flatten it badly
        if args.fmt == "csv":
            print("note: oracle output is json-only; ignoring --format csv",
                  file=sys.stderr)
        args.fmt = "json"
    elif args.fmt is None:
        args.fmt = "csv"
    run: Callable = args.run
    rows, checks, params = run(args)
    config = RunConfig(
        command=args.command,
        seed=args.seed,
        fmt=args.fmt,
        out=args.out,
        threads=args.threads,
        params=params,
    )
    emit(rows, config, checks)
    if not checks.all_passed:
        failed = sum(not e["passed"] for e in checks.entries)
        print(f"{args.command}: {failed} check(s) failed", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
