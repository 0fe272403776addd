"""Shared fixtures and independent oracles (kept free of primelab sieve logic)."""
from __future__ import annotations

import math

import numpy as np
import pytest

from primelab import kernels


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # JIT compilation happens once here, not inside timed tests
    kernels.warmup()


def simple_sieve(limit: int) -> list[int]:
    """Plain bytearray sieve, structurally unlike the packaged segmented one."""
    if limit < 2:
        return []
    flags = bytearray(b"\x01") * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = b"\x00" * (((limit - p * p) // p) + 1)
    return [i for i in range(limit + 1) if flags[i]]


def trial_is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def trial_mobius(d: int) -> int:
    if d == 1:
        return 1
    sign = 1
    rest = d
    f = 2
    while f * f <= rest:
        if rest % f == 0:
            rest //= f
            if rest % f == 0:
                return 0
            sign = -sign
        f += 1
    if rest > 1:
        sign = -sign
    return sign


def trial_factor_primes(n: int) -> set[int]:
    out = set()
    rest = n
    f = 2
    while f * f <= rest:
        if rest % f == 0:
            out.add(f)
            while rest % f == 0:
                rest //= f
        f += 1
    if rest > 1:
        out.add(rest)
    return out


def composite_mask_by_trial_division(limit: int) -> np.ndarray:
    """Vectorized remainder test against every d <= sqrt(limit)."""
    values = np.arange(limit + 1, dtype=np.int64)
    composite = np.zeros(limit + 1, dtype=bool)
    composite[:2] = True
    for d in range(2, math.isqrt(limit) + 1):
        hits = (values % d == 0) & (values != d)
        composite |= hits
    composite[:2] = True
    return composite
