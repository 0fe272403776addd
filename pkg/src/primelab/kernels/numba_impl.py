"""Numba-jitted implementations of the hot kernels.

Same signatures and accumulation order as ``numpy_impl``; plain loops that
LLVM turns into tight machine code.  ``cache=True`` keeps compiled artifacts
across processes.
"""
from __future__ import annotations

import numpy as np
from numba import njit

BACKEND = "numba"

_JIT = {"cache": True, "nogil": True}


@njit(**_JIT)
def mark_odd_composites(bits, first_odd, odd_primes):
    span_end = first_odd + 2 * bits.size
    for p in odd_primes:
        start = p * p
        first_mult = ((first_odd + p - 1) // p) * p
        if first_mult > start:
            start = first_mult
        if start % 2 == 0:
            start += p
        if start >= span_end:
            continue
        for j in range((start - first_odd) // 2, bits.size, p):
            bits[j] = False


@njit(**_JIT)
def prime_hit_rows(n0, length, offsets, primes):
    rows = np.zeros((len(primes), length), dtype=np.bool_)
    for i in range(len(primes)):
        p = primes[i]
        for h in offsets:
            first = (-(n0 + h)) % p
            for idx in range(first, length, p):
                rows[i, idx] = True
    return rows


@njit(**_JIT)
def small_factor_mask(n0, length, offsets, primes, min_n):
    mask = np.zeros(length, dtype=np.bool_)
    for i in range(len(primes)):
        p = primes[i]
        lim = min_n[i]
        for h in offsets:
            first = (-(n0 + h)) % p
            n_first = n0 + first
            if n_first < lim:
                first += p * ((lim - n_first + p - 1) // p)
            for idx in range(first, length, p):
                mask[idx] = True
    return mask


@njit(**_JIT)
def divisor_weight_block(hit_rows, d_ptr, d_idx, coefs):
    # row-major sweeps; per-element adds still happen in divisor order, so the
    # result is bit-identical to the numpy backend
    length = hit_rows.shape[1]
    w = np.zeros(length, dtype=np.float64)
    combined = np.empty(length, dtype=np.bool_)
    for j in range(len(coefs)):
        a, b = d_ptr[j], d_ptr[j + 1]
        c = coefs[j]
        if a == b:
            for n in range(length):
                w[n] += c
            continue
        row = hit_rows[d_idx[a]]
        for n in range(length):
            combined[n] = row[n]
        for t in range(a + 1, b):
            row = hit_rows[d_idx[t]]
            for n in range(length):
                combined[n] = combined[n] and row[n]
        for n in range(length):
            if combined[n]:
                w[n] += c
    return w


@njit(**_JIT)
def residue_log_sums(residues, weights, q):
    out = np.zeros(q, dtype=np.float64)
    for i in range(len(residues)):
        out[residues[i]] += weights[i]
    return out
