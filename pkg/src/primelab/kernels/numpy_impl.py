"""Pure-numpy implementations of the hot kernels.

Each function here has a loop-based twin in ``numba_impl`` with the same
signature and the same floating-point accumulation order, so the two
backends agree bit-for-bit on the float kernels.
"""
from __future__ import annotations

import numpy as np

BACKEND = "numpy"


def mark_odd_composites(bits: np.ndarray, first_odd: int, odd_primes: np.ndarray) -> None:
    """Clear composite positions in an odd-only primality bitmap.

    ``bits[j]`` stands for the odd number ``first_odd + 2*j``.  Multiples of
    each sieving prime are cleared starting at ``p*p`` so primes inside the
    window survive.
    """
    span_end = first_odd + 2 * bits.size
    for p in odd_primes:
        p = int(p)
        start = max(p * p, ((first_odd + p - 1) // p) * p)
        if start % 2 == 0:
            start += p
        if start >= span_end:
            continue
        bits[(start - first_odd) // 2 :: p] = False


def prime_hit_rows(n0: int, length: int, offsets: np.ndarray, primes: np.ndarray) -> np.ndarray:
    """Row i marks the n in [n0, n0+length) with primes[i] dividing prod(n + h)."""
    rows = np.zeros((len(primes), length), dtype=np.bool_)
    for i, p in enumerate(primes):
        p = int(p)
        for h in offsets:
            first = (-(n0 + int(h))) % p
            if first < length:
                rows[i, first::p] = True
    return rows


def small_factor_mask(
    n0: int,
    length: int,
    offsets: np.ndarray,
    primes: np.ndarray,
    min_n: np.ndarray,
) -> np.ndarray:
    """Mark n in [n0, n0+length) where some primes[i] >= its activation bound divides prod(n + h).

    ``min_n[i]`` is the smallest n at which primes[i] counts as a small factor
    (0 for an unconditional sieve); used for bounds of the form p <= n^c.
    """
    mask = np.zeros(length, dtype=np.bool_)
    for i, p in enumerate(primes):
        p = int(p)
        lim = int(min_n[i])
        for h in offsets:
            first = (-(n0 + int(h))) % p
            n_first = n0 + first
            if n_first < lim:
                first += p * ((lim - n_first + p - 1) // p)
            if first < length:
                mask[first::p] = True
    return mask


def divisor_weight_block(
    hit_rows: np.ndarray,
    d_ptr: np.ndarray,
    d_idx: np.ndarray,
    coefs: np.ndarray,
) -> np.ndarray:
    """Accumulate w[n] = sum_j coefs[j] * [every prime of divisor j divides prod(n + h)].

    Divisor j owns the prime rows ``d_idx[d_ptr[j]:d_ptr[j+1]]``; an empty
    slice is the divisor 1, which always contributes.
    """
    length = hit_rows.shape[1]
    w = np.zeros(length, dtype=np.float64)
    for j in range(len(coefs)):
        a, b = int(d_ptr[j]), int(d_ptr[j + 1])
        if a == b:
            w += coefs[j]
            continue
        hit = hit_rows[int(d_idx[a])]
        for t in range(a + 1, b):
            hit = hit & hit_rows[int(d_idx[t])]
        w += coefs[j] * hit
    return w


def residue_log_sums(residues: np.ndarray, weights: np.ndarray, q: int) -> np.ndarray:
    """Per-residue-class sums of ``weights`` (input order preserved per class)."""
    return np.bincount(residues, weights=weights, minlength=q)[:q]
