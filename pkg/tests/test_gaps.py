import math
from fractions import Fraction

import numpy as np
import pytest

from primelab import gaps

from conftest import simple_sieve, trial_is_prime


def test_gap_stream_small():
    records = list(gaps.gap_stream(12))
    assert [(r.index, r.prime, r.gap) for r in records] == [
        (1, 2, 1),
        (2, 3, 2),
        (3, 5, 2),
        (4, 7, 4),
    ]


def test_gap_stream_hundred():
    records = list(gaps.gap_stream(100))
    assert len(records) == 24
    assert max(r.gap for r in records) == 8
    # cross-check the whole stream against an independent sieve
    primes = simple_sieve(100)
    assert [(i + 1, primes[i], primes[i + 1] - primes[i]) for i in range(24)] == [
        (r.index, r.prime, r.gap) for r in records
    ]


def test_gap_stream_count_to_a_million():
    assert sum(1 for _ in gaps.gap_stream(10**6)) == 78497


def test_gap_stream_validation():
    with pytest.raises(ValueError):
        list(gaps.gap_stream(2))


def test_mean_normalized_gap():
    assert gaps.mean_normalized_gap(100) == pytest.approx(1.2449212065583148, rel=1e-12)
    with pytest.raises(ValueError):
        gaps.mean_normalized_gap(3)
    by_index = gaps.mean_normalized_gap(10**4, normalizer="index")
    by_prime = gaps.mean_normalized_gap(10**4, normalizer="prime")
    assert by_index > by_prime  # log n < log p_n from n = 2 on
    with pytest.raises(ValueError):
        gaps.mean_normalized_gap(100, normalizer="nonsense")


def test_slow_oscillation_log():
    report = gaps.slow_oscillation_check(gaps.TestFunction.log(), 10**6, 0.1)
    assert not report.blocks[0][1]  # log oscillates too much on tiny blocks
    assert report.passes_from is not None
    assert report.passes_from <= 4096
    assert report.first_violation == 4


def test_slow_oscillation_identity_fails_everywhere():
    f = gaps.TestFunction.custom(lambda x: x, "identity")
    report = gaps.slow_oscillation_check(f, 10**4, 0.5)
    assert not report
    assert all(not ok for _, ok in report.blocks)


def test_slow_oscillation_constant_passes():
    f = gaps.TestFunction.custom(lambda x: np.ones_like(x), "one")
    report = gaps.slow_oscillation_check(f, 10**4, 0.01)
    assert report
    assert report.first_violation is None
    assert report.passes_from == report.blocks[0][0]


def test_builtin_normalizers_positive_and_slow():
    for name, factory in gaps.BUILTIN_TEST_FUNCTIONS.items():
        f = factory()
        assert f.tag == name
        vals = f(np.array([3.0, 10.0, 10.0**6]))
        assert np.all(vals > 0)
        report = gaps.slow_oscillation_check(f, 10**6, 0.25)
        assert report.passes_from is not None  # slow oscillation from some block on


def test_histogram_single_bin_holds_everything():
    hist = gaps.limit_point_histogram(10**4, gaps.TestFunction.log(), 1, math.inf)
    total_records = sum(1 for _ in gaps.gap_stream(10**4)) - 1  # (2, 3) excluded
    assert int(hist.counts.sum()) == total_records
    assert hist.overflow == 0 and hist.underflow == 0


def test_histogram_min_and_unit_bin():
    hist = gaps.limit_point_histogram(10**6, gaps.TestFunction.log(), 100, 10.0)
    assert hist.min_value <= 0.2  # a late twin gap scales to 2/log(1e6)
    assert hist.counts[int(1.0 / hist.bin_width)] > 0
    assert hist.min_value > 0


def test_histogram_minimum_at_ten_million():
    # a late twin gap pushes the minimum of d_n / log(p_n) below 0.15
    hist = gaps.limit_point_histogram(10**7, gaps.TestFunction.log(), 50, 10.0)
    assert hist.min_value <= 0.15
    assert hist.counts[int(1.0 / hist.bin_width)] > 0


def test_histogram_first_moment_matches_mean():
    hist = gaps.limit_point_histogram(10**6, gaps.TestFunction.log(), 400, 40.0)
    mean = gaps.mean_normalized_gap(10**6)
    assert hist.overflow == 0
    assert abs(hist.first_moment - mean) <= hist.bin_width / 2 + 0.01


def test_histogram_validation():
    with pytest.raises(ValueError):
        gaps.limit_point_histogram(100, gaps.TestFunction.log(), 0, 10.0)
    with pytest.raises(ValueError):
        gaps.limit_point_histogram(100, gaps.TestFunction.log(), 10, 0.0)


def test_ratio_extremes_small():
    res = gaps.ratio_extremes(20)
    assert res.min_ratio == 0.5
    assert res.max_ratio == 2.0
    w = res.max_witness
    assert w.next_gap / w.gap == 2.0


def test_ratio_extremes_witnesses_revalidate():
    res = gaps.ratio_extremes(10**5)
    for w in (res.min_witness, res.max_witness, res.min_scaled_witness, res.max_scaled_witness):
        assert trial_is_prime(w.prime)
        assert trial_is_prime(w.prime + w.gap)
        assert trial_is_prime(w.prime + w.gap + w.next_gap)
        for m in range(w.prime + 1, w.prime + w.gap):
            assert not trial_is_prime(m)
        for m in range(w.prime + w.gap + 1, w.prime + w.gap + w.next_gap):
            assert not trial_is_prime(m)


def test_ratio_extremes_monotone_under_extension():
    small = gaps.ratio_extremes(10**4)
    large = gaps.ratio_extremes(10**5)
    assert large.min_ratio <= small.min_ratio
    assert large.max_ratio >= small.max_ratio
    with pytest.raises(ValueError):
        gaps.ratio_extremes(4)


def test_strong_census_examples():
    census = gaps.strong_polignac_census(100, 50)
    assert census.count(2) == 8
    assert census.count(6) == 7
    with pytest.raises(ValueError):
        census.count(5)
    with pytest.raises(ValueError):
        census.count(52)


def test_strong_census_total_matches_stream():
    limit, max_even = 10**4, 30
    census = gaps.strong_polignac_census(limit, max_even)
    records = [r for r in gaps.gap_stream(limit) if r.index >= 2]
    assert int(census.counts.sum()) + census.overflow == len(records)


def test_weak_census_examples():
    assert gaps.weak_polignac_census(20, 10).count(2) == 4
    census = gaps.weak_polignac_census(10**3, 100)
    assert all(count >= 1 for _, count in census.items())


def test_weak_dominates_strong():
    limit = 10**4
    strong = gaps.strong_polignac_census(limit, 100)
    weak = gaps.weak_polignac_census(limit, 100)
    for even, s_count in strong.items():
        assert weak.count(even) >= s_count


def test_weak_census_monotone_in_limit():
    lo = gaps.weak_polignac_census(10**3, 60)
    hi = gaps.weak_polignac_census(2 * 10**3, 60)
    for even, count in lo.items():
        assert hi.count(even) >= count


def test_census_validation():
    with pytest.raises(ValueError):
        gaps.strong_polignac_census(100, 7)
    with pytest.raises(ValueError):
        gaps.weak_polignac_census(100, 0)


def test_density_small_values():
    assert gaps.polignac_density_lower(2).exact == Fraction(1, 4)
    d5 = gaps.polignac_density_lower(5)
    assert d5.exact == Fraction(1, 75)
    assert d5.value == pytest.approx(1 / 75, rel=1e-12)
    assert d5.asymptote > 0
    with pytest.raises(ValueError):
        gaps.polignac_density_lower(1)


def test_density_float_matches_exact():
    for k in (2, 3, 7, 20, 101):
        d = gaps.polignac_density_lower(k)
        assert d.value == pytest.approx(float(d.exact), rel=1e-12)


def test_density_large_k_near_asymptote():
    d = gaps.polignac_density_lower(3_500_000)
    assert d.value / d.asymptote == pytest.approx(1.0, abs=0.05)
