import math

import numpy as np
import pytest

from primelab import engine

from conftest import composite_mask_by_trial_division, simple_sieve, trial_is_prime


def test_primes_up_to_trivial():
    assert engine.primes_up_to(10).tolist() == [2, 3, 5, 7]
    assert engine.primes_up_to(1).tolist() == []
    assert engine.primes_up_to(0).tolist() == []
    assert engine.primes_up_to(2).tolist() == [2]


def test_primes_up_to_against_simple_sieve():
    assert engine.primes_up_to(10**5).tolist() == simple_sieve(10**5)


def test_pi_of_one_million():
    primes = engine.primes_up_to(10**6)
    assert len(primes) == 78498
    assert len(simple_sieve(10**6)) == 78498


def test_primality_against_trial_division():
    limit = 10**5
    composite = composite_mask_by_trial_division(limit)
    mask = engine.prime_mask(limit)
    assert np.array_equal(mask, ~composite)


def test_sieve_segment_examples():
    seg = engine.sieve_segment(100, 110)
    assert seg.primes().tolist() == [101, 103, 107, 109]
    assert engine.sieve_segment(2, 3).primes().tolist() == [2]
    assert engine.sieve_segment(2, 3).is_prime(2)


def test_sieve_segment_high_window_against_trial_division():
    lo, hi = 10**7, 10**7 + 10**5
    seg = engine.sieve_segment(lo, hi)
    base = simple_sieve(math.isqrt(hi))
    values = np.arange(lo, hi, dtype=np.int64)
    composite = np.zeros(hi - lo, dtype=bool)
    for p in base:
        first = ((lo + p - 1) // p) * p
        composite[first - lo :: p] = True
    assert np.array_equal(seg.primality(), ~composite)


def test_segment_stitching():
    rng = np.random.default_rng(7)
    for _ in range(10):
        a = int(rng.integers(2, 5000))
        b = int(rng.integers(a + 1, a + 3000))
        c = int(rng.integers(b + 1, b + 3000))
        left = engine.sieve_segment(a, b).primality()
        right = engine.sieve_segment(b, c).primality()
        whole = engine.sieve_segment(a, c).primality()
        assert np.array_equal(np.concatenate([left, right]), whole)


def test_segment_argument_errors():
    with pytest.raises(ValueError):
        engine.sieve_segment(10, 10)
    with pytest.raises(ValueError):
        engine.sieve_segment(11, 10)
    with pytest.raises(ValueError):
        engine.sieve_segment(1, 10)


def test_spf_table_invariants():
    tables = engine.dense_tables(10**4, with_spf=True)
    spf = tables.spf
    assert spf is not None
    for m in range(2, 10**4 + 1):
        p = int(spf[m])
        assert m % p == 0
        assert trial_is_prime(p)
        for q in range(2, p):
            assert m % q != 0


def test_mobius_table():
    tables = engine.dense_tables(10**5, with_mobius=True)
    mu = tables.mobius
    assert mu is not None
    # spot-check against direct factorization
    import conftest

    for m in (1, 2, 4, 6, 12, 30, 49, 210, 9699, 99991):
        assert int(mu[m]) == conftest.trial_mobius(m)
    density = np.count_nonzero(mu[1:]) / 10**5
    assert 0.55 <= density <= 0.65  # squarefree density is 6/pi^2


def test_tables_are_read_only():
    seg = engine.sieve_segment(10, 50)
    with pytest.raises(ValueError):
        seg.odd_bits[0] = False


def test_smallest_prime_factor_bounded():
    assert engine.smallest_prime_factor_bounded(91, 10) == 7
    assert engine.smallest_prime_factor_bounded(97, 10) is None
    assert engine.smallest_prime_factor_bounded(2**4 * 31, 5) == 2
    assert engine.smallest_prime_factor_bounded(7, 10) == 7
    assert engine.smallest_prime_factor_bounded(101, 9) is None
    with pytest.raises(ValueError):
        engine.smallest_prime_factor_bounded(1, 10)


def test_factorize():
    assert engine.factorize(12) == [(2, 2), (3, 1)]
    assert engine.factorize(1) == []
    assert engine.factorize(999983) == [(999983, 1)]
    assert trial_is_prime(999983)
    with pytest.raises(ValueError):
        engine.factorize(0)


def test_factorize_roundtrip_random():
    rng = np.random.default_rng(11)
    for n in rng.integers(1, 10**9, size=50):
        n = int(n)
        prod = 1
        for p, e in engine.factorize(n):
            assert trial_is_prime(p)
            prod *= p**e
        assert prod == n


def test_euler_phi():
    assert engine.euler_phi(1) == 1
    assert engine.euler_phi(10) == 4
    assert engine.euler_phi(97) == 96
    # brute force comparison
    for q in (12, 36, 97, 360):
        brute = sum(1 for a in range(q) if math.gcd(a, q) == 1)
        assert engine.euler_phi(q) == brute


def test_segmented_path_consistent_with_dense():
    # above 2^24 the stream switches to stitched segments; the overlap with
    # the dense path and a directly sieved continuation must agree
    dense = engine.primes_up_to(16_000_000)
    segmented = engine.primes_up_to(17_000_000, segment_entries=1 << 15)
    assert np.array_equal(segmented[: len(dense)], dense)
    tail = engine.sieve_segment(16_000_001, 17_000_001).primes()
    assert np.array_equal(segmented[len(dense) :], tail)


def test_memory_budget_error(monkeypatch):
    monkeypatch.setenv(engine.MEMORY_BUDGET_ENV, "1000")
    with pytest.raises(engine.ResourceLimitError) as err:
        engine.primes_up_to(10**7)
    assert "1000" in str(err.value)


def test_range_guard():
    with pytest.raises(ValueError):
        engine.primes_up_to((1 << 62) + 1)
