#!/usr/bin/env python3
"""Audit every analytic formula against brute-force enumeration for small n.

For each n the script replays all (n-1)! slot orderings and compares the
enumerated E[M_n], law of M_n, per-site vacancy profile, and E[T_n] with the
recursion, convolution, closed-form profile, and absorbing chain. It also
sweeps the run-parity site classifier over every ordering.
"""
import argparse
from fractions import Fraction

from pagepark import (
    classify_site,
    distribution_M,
    enumerate_orderings,
    expected_M,
    per_site_vacancy_exact,
    verify_lemma1,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=8, help="largest n to audit (<= 10)")
    args = ap.parse_args()

    failures = 0
    for n in range(2, args.n_max + 1):
        rep = enumerate_orderings(n)
        issues = []
        if rep.expected_M != expected_M(n):
            issues.append("E[M] recursion")
        if rep.distribution_M != distribution_M(n).probs:
            issues.append("law of M")
        profile = tuple(per_site_vacancy_exact(n, i) for i in range(1, n + 1))
        if rep.per_site_vacancy != profile:
            issues.append("vacancy profile")
        if sum(rep.per_site_vacancy, Fraction(0)) + rep.expected_M != n:
            issues.append("vacancy/occupancy identity")
        bad = verify_lemma1(n, classify_site)
        if bad:
            issues.append(f"classifier ({len(bad)} counterexamples)")
        status = "ok" if not issues else "FAIL: " + ", ".join(issues)
        failures += bool(issues)
        print(
            f"n={n}: {rep.permutations:>7} orderings  "
            f"E[M]={rep.expected_M}  E[T]={rep.expected_T}  {status}"
        )
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()
