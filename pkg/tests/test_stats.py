import numpy as np
import pytest

from fivewise import stats
from fivewise.chain import return_time_samples
from fivewise.stats import (
    MomentAccumulator,
    RateAccumulator,
    chi_square_gof,
    negbin_goodness_of_fit,
    rademacher_moments,
    sign_tuple_counts,
    two_sample_chi_square,
    uniform_tuple_report,
)


def test_chi_square_small_closed_form():
    # two equiprobable cells, counts 40/60: chi2 = (10^2/50)*2 = 4
    rep = chi_square_gof([40, 60], [0.5, 0.5], significance=0.05)
    assert rep.statistic == pytest.approx(4.0)
    assert rep.dof == 1
    # chi2(1) sf(4) = erfc(sqrt(2)) -> 0.0455
    assert rep.p_value == pytest.approx(0.0455, abs=2e-3)
    assert rep.reject  # at 5%
    assert not chi_square_gof([40, 60], [0.5, 0.5], 1e-3).reject


def test_chi_square_validates_inputs():
    with pytest.raises(ValueError):
        chi_square_gof([1, 2], [0.6, 0.6])
    with pytest.raises(ValueError):
        chi_square_gof([-1, 2], [0.5, 0.5])


def test_two_sample_chi_square_identical_and_disjoint():
    same = two_sample_chi_square([100, 200, 300], [100, 200, 300])
    assert same.statistic == pytest.approx(0.0)
    far = two_sample_chi_square([1000, 0], [0, 1000])
    assert far.reject


def test_sign_tuple_counts():
    x = np.array([[1, -1, 1], [1, 1, 1], [-1, -1, 1], [1, -1, 1]], dtype=np.int8)
    counts = sign_tuple_counts(x, [0, 1])
    # codes: bit0 = x[:,0]<0, bit1 = x[:,1]<0 -> [2, 0, 3, 2]
    assert counts.tolist() == [1, 0, 2, 1]


def test_moment_accumulator_matches_direct():
    gen = np.random.default_rng(0)
    x = gen.choice([-1, 1], size=(5000, 96)).astype(np.int8)
    acc = MomentAccumulator()
    acc.add(x[:2500])
    acc.add(x[2500:])
    y = x.sum(axis=1) / np.sqrt(96)
    for r in (2, 4, 6):
        est = acc.estimate(r)
        assert est.value == pytest.approx(float((y**r).mean()), rel=1e-12)
        assert est.stderr == pytest.approx(
            float((y**r).std(ddof=1) / np.sqrt(len(y))), rel=1e-9)
        assert est.replicates == 5000


def test_moment_suite_recovers_exact_rademacher():
    # the harness self-oracle at small scale: i.i.d. fair signs
    gen = np.random.default_rng(7)
    for m in (96, 1000):
        acc = MomentAccumulator()
        for _ in range(4):
            acc.add(gen.choice([-1, 1], size=(5000, m)).astype(np.int8))
        exact = rademacher_moments(m)
        for r in (2, 4, 6):
            est = acc.estimate(r)
            assert est.within(exact[r], 4.0), (m, r, est, exact[r])


def test_rate_accumulator():
    acc = RateAccumulator()
    acc.add(np.array([0.1, 0.2]))
    acc.add(np.array([0.3, 0.4]))
    mean, se = acc.estimate()
    rates = np.array([0.1, 0.2, 0.3, 0.4])
    assert mean == pytest.approx(0.25)
    assert se == pytest.approx(rates.std(ddof=1) / 2)


def test_negbin_gof_accepts_true_law_rejects_shifted():
    gaps = return_time_samples(600_000, seed=21)
    rep = negbin_goodness_of_fit(gaps)
    assert not rep.reject, rep.p_value
    shifted = negbin_goodness_of_fit(gaps[gaps > 6] - 1)
    assert shifted.reject


def test_negbin_probs_mean():
    probs = stats.negbin_probs(6, 3 / 8, 6, 300)
    support = np.arange(6, 301)
    assert probs.sum() == pytest.approx(1.0, abs=1e-12)
    assert float((probs[:-1] * support[:-1]).sum()) == pytest.approx(16.0, abs=1e-6)


def test_uniform_tuple_report_on_uniform_counts():
    gen = np.random.default_rng(3)
    counts = np.bincount(gen.integers(0, 32, size=200_000), minlength=32)
    assert not uniform_tuple_report(counts).reject


def test_bonferroni():
    assert stats.bonferroni(1e-3, 50) == pytest.approx(2e-5)
