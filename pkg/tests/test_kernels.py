import math
import os
import subprocess
import sys

import numpy as np
import pytest

from primelab.kernels import numpy_impl

try:
    from primelab.kernels import numba_impl
except ImportError:  # pragma: no cover
    numba_impl = None

needs_numba = pytest.mark.skipif(numba_impl is None, reason="numba unavailable")

from conftest import simple_sieve


def _mark_inputs(rng):
    first_odd = int(rng.integers(3, 10**6)) | 1
    size = int(rng.integers(100, 5000))
    primes = np.array(
        [p for p in simple_sieve(int(math.isqrt(first_odd + 2 * size)) + 1) if p > 2],
        dtype=np.int64,
    )
    return first_odd, size, primes


def test_mark_odd_composites_correct():
    rng = np.random.default_rng(2)
    for _ in range(5):
        first_odd, size, primes = _mark_inputs(rng)
        bits = np.ones(size, dtype=np.bool_)
        numpy_impl.mark_odd_composites(bits, first_odd, primes)
        values = first_odd + 2 * np.arange(size)
        prime_set = set(simple_sieve(int(values[-1])))
        expect = np.array([int(v) in prime_set for v in values])
        assert np.array_equal(bits, expect)


@needs_numba
def test_backends_agree_mark():
    rng = np.random.default_rng(5)
    for _ in range(5):
        first_odd, size, primes = _mark_inputs(rng)
        a = np.ones(size, dtype=np.bool_)
        b = np.ones(size, dtype=np.bool_)
        numpy_impl.mark_odd_composites(a, first_odd, primes)
        numba_impl.mark_odd_composites(b, first_odd, primes)
        assert np.array_equal(a, b)


def _hit_inputs(rng):
    n0 = int(rng.integers(1, 10**6))
    length = int(rng.integers(50, 4000))
    offsets = np.sort(rng.choice(30, size=int(rng.integers(1, 4)), replace=False)).astype(np.int64)
    primes = np.array([2, 3, 5, 7, 11, 13], dtype=np.int64)
    return n0, length, offsets, primes


@needs_numba
def test_backends_agree_hit_rows_and_mask():
    rng = np.random.default_rng(7)
    for _ in range(10):
        n0, length, offsets, primes = _hit_inputs(rng)
        a = numpy_impl.prime_hit_rows(n0, length, offsets, primes)
        b = numba_impl.prime_hit_rows(n0, length, offsets, primes)
        assert np.array_equal(a, b)
        min_n = rng.integers(0, n0 + length, size=len(primes)).astype(np.int64)
        am = numpy_impl.small_factor_mask(n0, length, offsets, primes, min_n)
        bm = numba_impl.small_factor_mask(n0, length, offsets, primes, min_n)
        assert np.array_equal(am, bm)


def test_hit_rows_semantics():
    rows = numpy_impl.prime_hit_rows(
        10, 20, np.array([0, 2], dtype=np.int64), np.array([3, 7], dtype=np.int64)
    )
    for i, p in enumerate((3, 7)):
        for idx in range(20):
            n = 10 + idx
            assert rows[i, idx] == ((n % p == 0) or ((n + 2) % p == 0))


def test_small_factor_mask_activation():
    # prime 5 only counts from n >= 30
    mask = numpy_impl.small_factor_mask(
        1, 60, np.array([0], dtype=np.int64), np.array([5], dtype=np.int64),
        np.array([30], dtype=np.int64),
    )
    hits = {int(n) for n in 1 + np.flatnonzero(mask)}
    assert hits == {30, 35, 40, 45, 50, 55, 60}


@needs_numba
def test_backends_agree_divisor_weights_bitwise():
    rng = np.random.default_rng(11)
    for _ in range(10):
        n0, length, offsets, primes = _hit_inputs(rng)
        rows = numpy_impl.prime_hit_rows(n0, length, offsets, primes)
        # random ragged divisor structure over the prime rows
        d_ptr = [0]
        d_idx = []
        for _ in range(int(rng.integers(1, 12))):
            take = rng.choice(len(primes), size=int(rng.integers(0, 3)), replace=False)
            d_idx.extend(int(t) for t in np.sort(take))
            d_ptr.append(len(d_idx))
        coefs = rng.normal(size=len(d_ptr) - 1)
        args = (
            rows,
            np.array(d_ptr, dtype=np.int64),
            np.array(d_idx, dtype=np.int64),
            coefs,
        )
        a = numpy_impl.divisor_weight_block(*args)
        b = numba_impl.divisor_weight_block(*args)
        assert np.array_equal(a, b)  # identical accumulation order, bit for bit


@needs_numba
def test_backends_agree_residue_sums_bitwise():
    rng = np.random.default_rng(13)
    values = np.sort(rng.choice(10**6, size=5000, replace=False)).astype(np.int64)
    logs = np.log(values.astype(np.float64) + 2)
    for q in (1, 2, 7, 97):
        a = numpy_impl.residue_log_sums(values % q, logs, q)
        b = numba_impl.residue_log_sums(values % q, logs, q)
        assert np.array_equal(a, b)


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ, PRIMELAB_PURE_NUMPY="1")
    out = subprocess.run(
        [sys.executable, "-c", "from primelab import kernels; print(kernels.BACKEND)"],
        capture_output=True, text=True, env=env, check=True,
    )
    assert out.stdout.strip() == "numpy"


def test_default_backend_reports_itself():
    from primelab import kernels

    assert kernels.BACKEND in {"numba", "numpy"}
    assert kernels.warmup() == kernels.BACKEND
