"""Truncated Mobius-smoothed divisor-sum sieve weights and their range sums.

The weight of n for an offset tuple H with smoothing exponent k + ell and
cutoff R is

    (1/(k+ell)!) * sum_{d <= R, d | prod(n + h)} mu(d) * log(R/d)^(k+ell),

an exact finite sum over the squarefree divisors of prod(n + h) up to R.
Only primes <= R can appear in such divisors, which is what makes blockwise
evaluation over n-ranges cheap.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import engine, kernels
from .series import DEFAULT_TRUNCATION, singular_series
from .tuples import KTuple

_BLOCK = 1 << 17
_MAX_DIVISORS = 1 << 20


@dataclass(frozen=True)
class WeightParams:
    """Tuple, extra smoothing exponent ell (0 <= ell <= k), cutoff R > 1, and
    an optional [pmin, pmax] window restricting the prime factors of admitted
    divisors."""

    tup: KTuple
    ell: int
    cutoff: float
    divisor_window: tuple[int, int] | None = None

    def __post_init__(self) -> None:
        if not 0 <= self.ell <= self.tup.k:
            raise ValueError(f"need 0 <= ell <= k, got ell={self.ell}, k={self.tup.k}")
        if not self.cutoff > 1:
            raise ValueError(f"cutoff must exceed 1, got {self.cutoff}")
        if self.divisor_window is not None:
            pmin, pmax = self.divisor_window
            if pmin > pmax:
                raise ValueError(f"bad divisor window {self.divisor_window}")

    @property
    def k(self) -> int:
        return self.tup.k

    @property
    def power(self) -> int:
        return self.k + self.ell

    def cache_key(self) -> tuple:
        return (self.tup.offsets, self.ell, self.cutoff, self.divisor_window)


@dataclass(frozen=True)
class DivisorTable:
    """Admitted squarefree divisors <= floor(R), ascending, with coefficients
    mu(d) * log(R/d)^power / power! and ragged prime-index lists."""

    primes: np.ndarray
    d_values: np.ndarray
    d_ptr: np.ndarray
    d_idx: np.ndarray
    coefs: np.ndarray


def _coefficient(depth: int, log_term: float, power: int) -> float:
    if log_term <= 0.0:
        return 0.0
    sign = -1.0 if depth % 2 else 1.0
    if power <= 20:
        return sign * log_term**power / math.factorial(power)
    return sign * math.exp(power * math.log(log_term) - math.lgamma(power + 1))


@lru_cache(maxsize=64)
def _divisor_table_cached(offsets, ell, cutoff, window) -> DivisorTable:
    cap = int(math.floor(cutoff))
    lo, hi = (2, cap) if window is None else (max(2, window[0]), min(cap, window[1]))
    if hi >= 2:
        all_primes = engine.base_primes(hi)
        plist = all_primes[all_primes >= lo].astype(np.int64)
    else:
        plist = np.empty(0, dtype=np.int64)

    power = len(offsets) + ell
    divisors: list[tuple[int, tuple[int, ...]]] = [(1, ())]

    def extend(start: int, prod: int, idxs: tuple[int, ...]) -> None:
        if len(divisors) > _MAX_DIVISORS:
            raise engine.ResourceLimitError(
                f"divisor enumeration exceeds {_MAX_DIVISORS} entries; lower the cutoff"
            )
        for t in range(start, len(plist)):
            nxt = prod * int(plist[t])
            if nxt > cap:
                break
            divisors.append((nxt, idxs + (t,)))
            extend(t + 1, nxt, idxs + (t,))

    extend(0, 1, ())
    divisors.sort(key=lambda item: item[0])

    d_values = np.array([d for d, _ in divisors], dtype=np.int64)
    d_ptr = np.zeros(len(divisors) + 1, dtype=np.int64)
    flat: list[int] = []
    coefs = np.zeros(len(divisors), dtype=np.float64)
    for j, (d, idxs) in enumerate(divisors):
        flat.extend(idxs)
        d_ptr[j + 1] = len(flat)
        coefs[j] = _coefficient(len(idxs), math.log(cutoff / d), power)
    d_idx = np.array(flat, dtype=np.int64) if flat else np.empty(0, dtype=np.int64)
    return DivisorTable(primes=plist, d_values=d_values, d_ptr=d_ptr, d_idx=d_idx, coefs=coefs)


def divisor_table(params: WeightParams) -> DivisorTable:
    return _divisor_table_cached(*params.cache_key())


def lambda_r(n: int, params: WeightParams) -> float:
    """Weight of a single n: factor each n + h, collect the distinct primes of
    the product, and sum the admitted-divisor contributions."""
    n = int(n)
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    engine._check_value(n + params.tup.offsets[-1], "n + max offset")
    table = divisor_table(params)
    dividing = set()
    for h in params.tup.offsets:
        for p, _ in engine.factorize(n + h):
            dividing.add(p)
    hit = np.array([int(p) in dividing for p in table.primes], dtype=np.bool_)

    total = 0.0
    for j in range(len(table.coefs)):
        a, b = int(table.d_ptr[j]), int(table.d_ptr[j + 1])
        if all(hit[table.d_idx[t]] for t in range(a, b)):
            total += table.coefs[j]
    return total


def _block_weights(n0: int, length: int, params: WeightParams, table: DivisorTable) -> np.ndarray:
    offsets = np.array(params.tup.offsets, dtype=np.int64)
    rows = kernels.prime_hit_rows(n0, length, offsets, table.primes)
    return kernels.divisor_weight_block(rows, table.d_ptr, table.d_idx, table.coefs)


def _iter_blocks(start: int, stop: int):
    n0 = start
    while n0 < stop:
        yield n0, min(_BLOCK, stop - n0)
        n0 += _BLOCK


def weighted_sum(N: int, params: WeightParams) -> float:
    """Sum of squared weights over n in [N, 2N); 0 for an empty range."""
    N = int(N)
    if N <= 0:
        return 0.0
    engine._check_value(2 * N + params.tup.offsets[-1], "range end")
    table = divisor_table(params)
    engine._require_budget(len(table.primes) * _BLOCK + 8 * _BLOCK, "weight block")
    total = 0.0
    for n0, length in _iter_blocks(N, 2 * N):
        w = _block_weights(n0, length, params, table)
        total += float(np.dot(w, w))
    return total


@dataclass(frozen=True)
class RestrictedSumResult:
    """Weighted-mass ratio of a divisibility-restricted sum, with the
    comparison bound log(p) / (p log R) and the implied constant."""

    ratio: float
    bound: float
    full_sum: float
    restricted_sum: float

    @property
    def constant(self) -> float:
        return self.ratio / self.bound


def lemma1_ratio(N: int, params: WeightParams, p: int) -> RestrictedSumResult:
    """Share of the squared-weight mass carried by n with p | prod(n + h)."""
    if not engine.is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    N = int(N)
    if N <= 0:
        raise ValueError("degenerate input: empty range")
    table = divisor_table(params)
    offsets = np.array(params.tup.offsets, dtype=np.int64)
    single = np.array([p], dtype=np.int64)
    no_cutoff = np.zeros(1, dtype=np.int64)
    full = 0.0
    restricted = 0.0
    for n0, length in _iter_blocks(N, 2 * N):
        w = _block_weights(n0, length, params, table)
        w2 = w * w
        full += float(np.sum(w2))
        mask = kernels.small_factor_mask(n0, length, offsets, single, no_cutoff)
        restricted += float(np.sum(w2[mask]))
    if full == 0.0:
        raise ValueError("degenerate input: weighted sum vanishes on this range")
    bound = math.log(p) / (p * math.log(params.cutoff))
    return RestrictedSumResult(
        ratio=restricted / full, bound=bound, full_sum=full, restricted_sum=restricted
    )


def _primes_strictly_below(threshold: float) -> np.ndarray:
    top = math.ceil(threshold) - 1
    if top < 2:
        return np.empty(0, dtype=np.int64)
    return engine.base_primes(top)


def rough_sum_fraction(N: int, params: WeightParams, eta: float) -> float:
    """Fraction of the squared-weight mass on n whose product prod(n + h) has
    a prime factor below cutoff**eta."""
    if not 0 < eta < 1:
        raise ValueError(f"need 0 < eta < 1, got {eta}")
    N = int(N)
    if N <= 0:
        raise ValueError("degenerate input: empty range")
    table = divisor_table(params)
    offsets = np.array(params.tup.offsets, dtype=np.int64)
    small = _primes_strictly_below(params.cutoff**eta)
    cutoffs = np.zeros(len(small), dtype=np.int64)
    full = 0.0
    rough = 0.0
    for n0, length in _iter_blocks(N, 2 * N):
        w = _block_weights(n0, length, params, table)
        w2 = w * w
        full += float(np.sum(w2))
        if len(small):
            mask = kernels.small_factor_mask(n0, length, offsets, small, cutoffs)
            rough += float(np.sum(w2[mask]))
    if full == 0.0:
        raise ValueError("degenerate input: weighted sum vanishes on this range")
    return rough / full


@dataclass(frozen=True)
class SurvivorCount:
    """Count of n in [N, 2N) whose product prod(n + h) is free of primes
    <= N^alpha, next to the sieve-theoretic comparison scale."""

    count: int
    bound_scale: float  # N * alpha^-k * S(H) / log^k N

    @property
    def ratio(self) -> float:
        return self.count / self.bound_scale


def selberg_survivor_count(
    N: int,
    tup: KTuple,
    alpha: float,
    series_truncation: int = DEFAULT_TRUNCATION,
) -> SurvivorCount:
    """Exact survivor count by sieving, with scale N * alpha^-k * S(H) / log^k N."""
    if not 0 < alpha < 0.5:
        raise ValueError(f"need 0 < alpha < 1/2, got {alpha}")
    N = int(N)
    if N < 2:
        raise ValueError(f"need N >= 2, got {N}")
    engine._check_value(2 * N + tup.offsets[-1], "range end")
    offsets = np.array(tup.offsets, dtype=np.int64)
    small = engine.base_primes(int(math.floor(N**alpha))) if N**alpha >= 2 else np.empty(0, np.int64)
    cutoffs = np.zeros(len(small), dtype=np.int64)
    count = 0
    for n0, length in _iter_blocks(N, 2 * N):
        if len(small):
            mask = kernels.small_factor_mask(n0, length, offsets, small, cutoffs)
            count += int(length - np.count_nonzero(mask))
        else:
            count += length
    series = singular_series(tup, series_truncation).value
    k = tup.k
    scale = N * alpha ** (-k) * series / math.log(N) ** k
    return SurvivorCount(count=count, bound_scale=scale)
