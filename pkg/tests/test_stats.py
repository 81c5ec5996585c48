"""Reporting layer: KS, count TV, histograms, correlation, records."""
import math
from fractions import Fraction

import numpy as np
import pytest

from fpplab import stats, theory
from fpplab.errors import (DomainError, InsufficientSampleError,
                           ZeroVarianceError)


def _limit_draws(s, k, size, seed):
    # inverse-transform sampling of the standardized limit law
    rng = np.random.default_rng(seed)
    u = rng.random(size)
    la = theory.tail_coefficient_log(s, k)
    return np.log(-np.log1p(-u)) - la


def test_report_pass_is_threshold_inclusive():
    r = stats.TestReport("x", 0.05, 0.05, 10)
    assert r.passed
    r2 = stats.TestReport("x", 0.0500001, 0.05, 10)
    assert not r2.passed


def test_ks_null_calibration():
    t = _limit_draws(0.5, 2, 100_000, seed=20260819)
    rep = stats.ks_against_gumbel(t, 0.5, 2, 0.006, test_name="null")
    assert rep.statistic < 0.006
    assert rep.passed
    assert rep.sample_size == 100_000


def test_ks_detects_constant_sample():
    t = np.zeros(500)
    rep = stats.ks_against_gumbel(t, 0.5, 2, 0.05, test_name="const")
    assert rep.statistic >= 0.5
    assert not rep.passed


def test_ks_requires_minimum_sample():
    with pytest.raises(InsufficientSampleError):
        stats.ks_against_gumbel(np.zeros(99), 0.5, 2, 0.05,
                                test_name="tiny")


def test_count_tv_true_poisson():
    rng = np.random.default_rng(7)
    counts = rng.poisson(2.9, size=10_000)
    rep = stats.poisson_count_test(counts, 2.9, 0.02, test_name="tv")
    assert rep.statistic < 0.02
    assert rep.passed


def test_count_tv_degenerate_zeros():
    counts = np.zeros(300, dtype=int)
    rep = stats.poisson_count_test(counts, 2.0, 0.1, test_name="zeros")
    # empirical mass sits entirely on 0; true law has e^{-2} there
    assert rep.statistic == pytest.approx(1.0 - math.exp(-2.0), abs=1e-6)
    assert not rep.passed


def test_count_tv_requires_minimum_sample():
    with pytest.raises(InsufficientSampleError):
        stats.poisson_count_test(np.zeros(199, dtype=int), 2.0, 0.1,
                                 test_name="tiny")


def test_count_tv_rejects_bad_input():
    with pytest.raises(DomainError):
        stats.poisson_count_test(np.full(300, -1), 2.0, 0.1,
                                 test_name="neg")
    with pytest.raises(DomainError):
        stats.poisson_count_test(np.zeros(300, dtype=int), -2.0, 0.1,
                                 test_name="negmean")


def test_hop_histogram_exact_unit_mass():
    recs = []
    for i, h in enumerate([2] * 351 + [3] * 648 + [7]):
        recs.append(stats.ExperimentRecord(
            n=100, s=0.5, seed=i, weight=1.0, hopcount=h,
            standardized_t=0.0))
    hist = stats.hop_histogram(recs)
    assert sum(hist.values()) == Fraction(1, 1)
    assert hist[2] == Fraction(351, 1000)
    assert hist[7] == Fraction(1, 1000)


def test_hop_histogram_rejects_empty():
    with pytest.raises(DomainError):
        stats.hop_histogram([])


def test_correlation_identical_pairs():
    rng = np.random.default_rng(99)
    x = rng.normal(size=500)
    rho = stats.pairwise_correlation(list(zip(x, x)))
    assert rho == pytest.approx(1.0, abs=1e-12)


def test_correlation_independent_pairs_small():
    rng = np.random.default_rng(123)
    x = rng.normal(size=10_000)
    y = rng.normal(size=10_000)
    rho = stats.pairwise_correlation(list(zip(x, y)))
    assert abs(rho) < 0.03


def test_correlation_errors():
    with pytest.raises(InsufficientSampleError):
        stats.pairwise_correlation([(0.1, 0.2)] * 99)
    with pytest.raises(ZeroVarianceError):
        stats.pairwise_correlation([(1.0, float(i)) for i in range(200)])


def test_make_record_standardizes_consistently():
    rec = stats.make_record(n=5000, s=0.5, seed=42, weight=0.8,
                            hopcount=2)
    want = theory.standardize_weight(0.5, 2, math.log(5000.0), 0.8)
    assert rec.standardized_t == pytest.approx(want, rel=1e-15)
    assert rec.n == 5000 and rec.hopcount == 2


def test_record_validation():
    with pytest.raises(DomainError):
        stats.make_record(n=2, s=0.5, seed=1, weight=1.0, hopcount=1)
    with pytest.raises(DomainError):
        stats.make_record(n=100, s=0.5, seed=1, weight=-1.0, hopcount=2)
