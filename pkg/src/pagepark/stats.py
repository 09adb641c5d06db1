"""Small statistics containers and tests shared by the simulators and the CLI."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2


@dataclass(frozen=True)
class SampleStats:
    """Mean, unbiased variance, and standard error of a sample."""

    mean: float
    variance: float
    stderr: float
    count: int

    @classmethod
    def from_samples(cls, samples) -> "SampleStats":
        x = np.asarray(samples, dtype=np.float64)
        n = x.size
        if n < 2:
            raise ValueError("need at least 2 samples")
        var = float(x.var(ddof=1))
        return cls(mean=float(x.mean()), variance=var, stderr=math.sqrt(var / n), count=n)


@dataclass(frozen=True)
class MCEstimate:
    """A Monte Carlo point estimate with its standard error."""

    estimate: float
    stderr: float
    replicas: int

    def within(self, target: float, k_sigma: float = 3.0, atol: float = 0.0) -> bool:
        return abs(self.estimate - target) <= k_sigma * self.stderr + atol


def proportion_estimate(hits: int, total: int) -> MCEstimate:
    p = hits / total
    se = math.sqrt(max(p * (1.0 - p), 1e-300) / total)
    return MCEstimate(estimate=p, stderr=se, replicas=total)


def chi_square_two_sample(counts_a: dict, counts_b: dict, min_expected: float = 5.0):
    """Two-sample chi-square homogeneity test over integer-valued outcomes.

    Bins with pooled expected count below min_expected are merged into their
    right neighbour (tail pooling). Returns (statistic, dof, p_value).
    """
    keys = sorted(set(counts_a) | set(counts_b))
    a = np.array([counts_a.get(k, 0) for k in keys], dtype=np.float64)
    b = np.array([counts_b.get(k, 0) for k in keys], dtype=np.float64)
    na, nb = a.sum(), b.sum()
    if na == 0 or nb == 0:
        raise ValueError("empty sample")

    # pool sparse bins so the chi-square approximation is sound
    pooled_a, pooled_b = [], []
    acc_a = acc_b = 0.0
    for va, vb in zip(a, b):
        acc_a += va
        acc_b += vb
        expected_min = min(na, nb) * (acc_a + acc_b) / (na + nb)
        if expected_min >= min_expected:
            pooled_a.append(acc_a)
            pooled_b.append(acc_b)
            acc_a = acc_b = 0.0
    if acc_a or acc_b:
        if pooled_a:
            pooled_a[-1] += acc_a
            pooled_b[-1] += acc_b
        else:
            pooled_a.append(acc_a)
            pooled_b.append(acc_b)
    a = np.array(pooled_a)
    b = np.array(pooled_b)
    if a.size < 2:
        return 0.0, 0, 1.0

    tot = a + b
    stat = 0.0
    for obs, n_side in ((a, na), (b, nb)):
        exp = tot * n_side / (na + nb)
        stat += float(((obs - exp) ** 2 / exp).sum())
    dof = a.size - 1
    return stat, dof, float(chi2.sf(stat, dof))


def ks_distance(samples, cdf) -> float:
    """Kolmogorov-Smirnov distance between an empirical sample and a cdf."""
    x = np.sort(np.asarray(samples, dtype=np.float64))
    n = x.size
    f = np.array([cdf(v) for v in x])
    upper = np.abs(np.arange(1, n + 1) / n - f).max()
    lower = np.abs(f - np.arange(0, n) / n).max()
    return float(max(upper, lower))
