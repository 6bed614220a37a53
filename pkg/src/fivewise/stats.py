"""Estimators and hypothesis tests shared by the verification campaigns.

Conventions: chi-square tests run at a configured significance (default
1e-3) with Bonferroni correction across a campaign's test family;
moment estimates carry replicate-level standard errors (each window is
one replicate) and are bracketed at four standard errors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import stats as _scipy_stats


@dataclass(frozen=True)
class ChiSquareReport:
    counts: tuple
    expected: tuple          # expected counts under the null
    statistic: float
    dof: int
    p_value: float
    significance: float

    @property
    def reject(self) -> bool:
        return self.p_value < self.significance


@dataclass(frozen=True)
class MomentEstimate:
    order: int
    value: float
    stderr: float
    replicates: int

    def within(self, target: float, sigmas: float = 4.0) -> bool:
        return abs(self.value - target) <= sigmas * self.stderr

    def lower_confidence(self, sigmas: float = 4.0) -> float:
        return self.value - sigmas * self.stderr


def chi_square_gof(counts, probs, significance: float = 1e-3,
                   ddof: int = 0) -> ChiSquareReport:
    """Goodness of fit of observed counts to exact cell probabilities."""
    counts = np.asarray(counts, dtype=np.float64)
    probs = np.asarray(probs, dtype=np.float64)
    if abs(probs.sum() - 1) > 1e-12:
        raise ValueError("cell probabilities must sum to 1")
    if (counts < 0).any():
        raise ValueError("negative counts")
    expected = probs * counts.sum()
    if (expected <= 0).any():
        raise ValueError("zero expected count; merge cells first")
    stat = float(((counts - expected) ** 2 / expected).sum())
    dof = len(counts) - 1 - ddof
    p = float(_scipy_stats.chi2.sf(stat, dof))
    return ChiSquareReport(tuple(counts.tolist()), tuple(expected.tolist()),
                           stat, dof, p, significance)


def two_sample_chi_square(counts_a, counts_b,
                          significance: float = 1e-3) -> ChiSquareReport:
    """Homogeneity test of two independent histograms (2 x K table)."""
    a = np.asarray(counts_a, dtype=np.float64)
    b = np.asarray(counts_b, dtype=np.float64)
    keep = (a + b) > 0
    a, b = a[keep], b[keep]
    na, nb = a.sum(), b.sum()
    pooled = (a + b) / (na + nb)
    ea, eb = pooled * na, pooled * nb
    stat = float((((a - ea) ** 2) / ea + ((b - eb) ** 2) / eb).sum())
    dof = len(a) - 1
    p = float(_scipy_stats.chi2.sf(stat, dof))
    return ChiSquareReport(tuple(a.tolist()), tuple(ea.tolist()), stat,
                           dof, p, significance)


def sign_tuple_counts(signs_2d: np.ndarray, indices) -> np.ndarray:
    """Joint cell counts of the sign tuple at `indices`, one row per
    replicate; cell code bit i is set when entry i is negative."""
    idx = np.asarray(indices)
    k = len(idx)
    bits = (signs_2d[:, idx] < 0) @ (1 << np.arange(k))
    return np.bincount(bits, minlength=1 << k)


def uniform_tuple_report(counts: np.ndarray,
                         significance: float = 1e-3) -> ChiSquareReport:
    cells = len(counts)
    return chi_square_gof(counts, np.full(cells, 1 / cells), significance)


@dataclass
class MomentAccumulator:
    """Streaming replicate-level moments of the normalized window sum."""

    orders: tuple = (2, 4, 6)
    count: int = 0
    sums: dict = field(default_factory=dict)
    squares: dict = field(default_factory=dict)

    def add(self, signs_2d: np.ndarray):
        m = signs_2d.shape[1]
        y = signs_2d.sum(axis=1, dtype=np.int64) / np.sqrt(m)
        self.count += len(y)
        for r in self.orders:
            v = y**r
            self.sums[r] = self.sums.get(r, 0.0) + float(v.sum())
            self.squares[r] = self.squares.get(r, 0.0) + float((v * v).sum())

    def estimate(self, order: int) -> MomentEstimate:
        n = self.count
        mean = self.sums[order] / n
        var = max(self.squares[order] / n - mean**2, 0.0) * n / (n - 1)
        return MomentEstimate(order, mean, (var / n) ** 0.5, n)


def rademacher_moments(m: int):
    """Exact normalized-sum moments of m independent fair signs."""
    return {2: 1.0, 4: 3.0 - 2.0 / m,
            6: 15.0 - 30.0 / m + 16.0 / m**2}


@dataclass
class RateAccumulator:
    """Replicate-level event-rate estimates (cluster-robust errors)."""

    count: int = 0
    sum_rates: float = 0.0
    sum_sq: float = 0.0

    def add(self, rates: np.ndarray):
        self.count += len(rates)
        self.sum_rates += float(rates.sum())
        self.sum_sq += float((rates * rates).sum())

    def estimate(self) -> tuple:
        n = self.count
        mean = self.sum_rates / n
        var = max(self.sum_sq / n - mean**2, 0.0) * n / (n - 1)
        return mean, (var / n) ** 0.5


def negbin_probs(r: int, p: float, lo: int, hi: int):
    """Exact cell probabilities of the waiting time for the r-th success
    on {lo..hi-1} plus one tail cell [hi, inf)."""
    dist = _scipy_stats.nbinom(r, p)
    cells = [float(dist.pmf(t - r)) for t in range(lo, hi)]
    cells.append(float(dist.sf(hi - 1 - r)))
    return np.array(cells)


def negbin_goodness_of_fit(gaps: np.ndarray, r: int = 6, p: float = 3 / 8,
                           significance: float = 1e-3,
                           min_expected: float = 8.0) -> ChiSquareReport:
    """Chi-square fit of observed waiting-time gaps to the exact law."""
    gaps = np.asarray(gaps)
    if len(gaps) < 100:
        raise ValueError("too few gap samples")
    if gaps.min() < r:
        raise ValueError(f"gap below the support minimum {r}")
    n = len(gaps)
    # choose the tail cut so every cell keeps a healthy expected count
    dist = _scipy_stats.nbinom(r, p)
    hi = r
    while float(dist.sf(hi - r)) * n >= min_expected and hi < r + 200:
        hi += 1
    probs = negbin_probs(r, p, r, hi)
    counts = np.bincount(np.clip(gaps, r, hi), minlength=hi + 1)[r:]
    return chi_square_gof(counts, probs, significance)


def bonferroni(significance: float, tests: int) -> float:
    return significance / max(tests, 1)


def ktuple_independence_test(index_sets, sign_batches,
                             significance: float = 1e-3,
                             correct_across: int | None = None):
    """Joint-law uniformity tests for several index tuples at once.

    `sign_batches` iterates 2-d sign arrays (replicates x positions);
    each index set accumulates its joint cell counts across batches and
    is tested against the uniform product law at the (Bonferroni
    corrected) significance.  Returns one report per index set.
    """
    index_sets = [np.asarray(s) for s in index_sets]
    counts = [None] * len(index_sets)
    for x in sign_batches:
        for i, idx in enumerate(index_sets):
            c = sign_tuple_counts(x, idx)
            counts[i] = c if counts[i] is None else counts[i] + c
    alpha = bonferroni(significance, correct_across or len(index_sets))
    return [uniform_tuple_report(c, alpha) for c in counts]


def partial_sum_moment_suite(sign_batches, orders=(2, 4, 6)):
    """Normalized partial-sum moments over replicate windows."""
    acc = MomentAccumulator(orders=tuple(orders))
    for x in sign_batches:
        acc.add(x)
    return {r: acc.estimate(r) for r in orders}


def tail_suite(depth_batches, n_max: int):
    """Depth-tail estimates with replicate-level standard errors.

    `depth_batches` iterates 2-d depth arrays; returns a list of
    (n, estimate, stderr) for n = 1..n_max against the (3/8)**n law.
    """
    accs = {n: RateAccumulator() for n in range(1, n_max + 1)}
    for n2d in depth_batches:
        for n in accs:
            accs[n].add((n2d >= n).mean(axis=1))
    return [(n,) + accs[n].estimate() for n in range(1, n_max + 1)]
