#!/usr/bin/env python3
"""Benchmark the jitted kernels against the pure-numpy fallback.

Runs every kernel on a representative workload with both backends and prints
a table of best-of-N times.  Verifies the outputs agree before timing.

    python benchmarks/bench_kernels.py [--repeats 5] [--quick]
"""
from __future__ import annotations

import argparse
import math
import time

import numpy as np

from primelab.kernels import numpy_impl

try:
    from primelab.kernels import numba_impl
except ImportError:
    numba_impl = None


def simple_primes(limit):
    flags = bytearray(b"\x01") * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = b"\x00" * (((limit - p * p) // p) + 1)
    return np.array([i for i in range(limit + 1) if flags[i]], dtype=np.int64)


def build_workloads(quick: bool):
    scale = 4 if quick else 1
    seg_entries = (1 << 20) // scale
    first_odd = 10**9 + 1
    seg_primes = simple_primes(math.isqrt(first_odd + 2 * seg_entries) + 1)[1:]

    length = (1 << 18) // scale
    n0 = 10**5
    offsets = np.array([0, 2, 6], dtype=np.int64)
    hit_primes = simple_primes(97)
    rows = numpy_impl.prime_hit_rows(n0, length, offsets, hit_primes)

    # squarefree divisor structure over those primes, products <= 100
    d_ptr = [0]
    d_idx: list[int] = []
    coefs = []
    plist = [int(p) for p in hit_primes]

    def extend(start, prod, idxs):
        for t in range(start, len(plist)):
            nxt = prod * plist[t]
            if nxt > 100:
                break
            d_idx.extend(idxs + [t])
            d_ptr.append(len(d_idx))
            coefs.append((-1.0) ** (len(idxs) + 1) * math.log(100.0 / nxt) ** 3)
            extend(t + 1, nxt, idxs + [t])

    d_ptr.append(0)  # divisor 1
    coefs.append(math.log(100.0) ** 3)
    d_ptr[-1] = len(d_idx)
    extend(0, 1, [])

    theta_primes = simple_primes((10**7) // scale)
    theta_logs = np.log(theta_primes.astype(np.float64))

    return {
        "mark_odd_composites": (
            lambda impl: impl.mark_odd_composites(
                np.ones(seg_entries, dtype=np.bool_), first_odd, seg_primes
            ),
        ),
        "prime_hit_rows": (
            lambda impl: impl.prime_hit_rows(n0, length, offsets, hit_primes),
        ),
        "small_factor_mask": (
            lambda impl: impl.small_factor_mask(
                n0, length, offsets, hit_primes,
                np.zeros(len(hit_primes), dtype=np.int64),
            ),
        ),
        "divisor_weight_block": (
            lambda impl: impl.divisor_weight_block(
                rows,
                np.array(d_ptr, dtype=np.int64),
                np.array(d_idx, dtype=np.int64),
                np.array(coefs),
            ),
        ),
        "residue_log_sums": (
            lambda impl: impl.residue_log_sums(theta_primes % 101, theta_logs, 101),
        ),
    }


def best_time(fn, repeats):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--quick", action="store_true")
    args = parser.parse_args()

    workloads = build_workloads(args.quick)
    print(f"{'kernel':<24} {'numpy':>12} {'numba':>12} {'speedup':>9}")
    for name, (call,) in workloads.items():
        np_result = call(numpy_impl)
        np_time = best_time(lambda: call(numpy_impl), args.repeats)
        if numba_impl is None:
            print(f"{name:<24} {np_time*1e3:>10.2f}ms {'n/a':>12} {'n/a':>9}")
            continue
        nb_result = call(numba_impl)  # also triggers compilation
        if np_result is not None and nb_result is not None:
            assert np.array_equal(np_result, nb_result), f"{name}: backends disagree"
        nb_time = best_time(lambda: call(numba_impl), args.repeats)
        print(
            f"{name:<24} {np_time*1e3:>10.2f}ms {nb_time*1e3:>10.2f}ms "
            f"{np_time/nb_time:>8.1f}x"
        )


if __name__ == "__main__":
    main()
