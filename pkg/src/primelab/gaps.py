"""Consecutive-prime gap statistics: normalized gaps, limit-point histograms,
gap-ratio extremes, and difference-of-primes censuses.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterator

import numpy as np

from . import engine


@dataclass(frozen=True)
class GapRecord:
    index: int  # n, 1-based
    prime: int  # p_n
    gap: int  # p_{n+1} - p_n


def _primes_and_gaps(limit: int) -> tuple[np.ndarray, np.ndarray]:
    primes = engine.primes_up_to(limit)
    if len(primes) < 2:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    return primes[:-1], np.diff(primes)


def gap_stream(limit: int) -> Iterator[GapRecord]:
    """All (n, p_n, d_n) with p_{n+1} <= limit, ascending."""
    if limit < 3:
        raise ValueError(f"need limit >= 3, got {limit}")
    lowers, gaps = _primes_and_gaps(limit)
    for n, (p, d) in enumerate(zip(lowers, gaps), start=1):
        yield GapRecord(index=n, prime=int(p), gap=int(d))


def mean_normalized_gap(limit: int, normalizer: str = "prime") -> float:
    """Average of d_n / log(p_n) over the stream (the average tends to 1).

    ``normalizer="index"`` divides by log(n) instead; log(p_n) is the default
    because it is scale-correct at finite range.
    """
    if limit < 10:
        raise ValueError(f"need limit >= 10, got {limit}")
    lowers, gaps = _primes_and_gaps(limit)
    if len(gaps) == 0:
        raise ValueError("degenerate input: no gaps below limit")
    if normalizer == "prime":
        return float(np.mean(gaps / np.log(lowers.astype(np.float64))))
    if normalizer == "index":
        # log(1) = 0, so the first record is dropped under index normalization
        denom = np.log(np.arange(2, len(gaps) + 1, dtype=np.float64))
        return float(np.mean(gaps[1:] / denom))
    raise ValueError(f"unknown normalizer {normalizer!r}")


# ---------------------------------------------------------------------------
# test functions for gap normalization


@dataclass(frozen=True)
class TestFunction:
    """Positive normalizer f applied to the lower prime of each gap."""

    tag: str
    _fn: Callable[[np.ndarray], np.ndarray]

    def __call__(self, x) -> np.ndarray:
        return self._fn(np.asarray(x, dtype=np.float64))

    @classmethod
    def log(cls) -> "TestFunction":
        return cls("log", lambda x: np.log(x))

    @classmethod
    def sqrt_log(cls) -> "TestFunction":
        """(log n)^(1/2) * (log log n)^2"""
        return cls("sqrt-log", lambda x: np.sqrt(np.log(x)) * np.log(np.log(x)) ** 2)

    @classmethod
    def log_three_sevenths(cls) -> "TestFunction":
        """(log n)^(3/7) * (log log n)^(4/7)"""
        return cls(
            "log-3-7",
            lambda x: np.log(x) ** (3.0 / 7.0) * np.log(np.log(x)) ** (4.0 / 7.0),
        )

    @classmethod
    def custom(cls, fn: Callable[[np.ndarray], np.ndarray], tag: str = "custom") -> "TestFunction":
        return cls(tag, fn)


BUILTIN_TEST_FUNCTIONS = {
    "log": TestFunction.log,
    "sqrt-log": TestFunction.sqrt_log,
    "log-3-7": TestFunction.log_three_sevenths,
}


@dataclass(frozen=True)
class OscillationReport:
    """Dyadic-block check of (1-eps) f(N) <= f(n) <= (1+eps) f(N) on [N, 2N]."""

    eps: float
    blocks: tuple[tuple[int, bool], ...]  # (N, block passed)
    first_violation: int | None
    passes_from: int | None  # smallest N from which every later block passes

    def __bool__(self) -> bool:
        return self.first_violation is None


def slow_oscillation_check(
    f: TestFunction,
    n_max: int,
    eps: float,
    start: int = 4,
    samples_per_block: int = 2048,
) -> OscillationReport:
    """Dense-sample each dyadic block [N, 2N] up to n_max against f(N)."""
    if eps <= 0:
        raise ValueError(f"need eps > 0, got {eps}")
    if n_max < 2 * start:
        raise ValueError(f"need n_max >= {2 * start}")
    blocks: list[tuple[int, bool]] = []
    N = start
    while 2 * N <= n_max:
        count = min(samples_per_block, N + 1)
        samples = np.unique(np.linspace(N, 2 * N, count).astype(np.int64))
        ref = float(f(N))
        vals = f(samples)
        ok = bool(np.all(vals >= (1 - eps) * ref) and np.all(vals <= (1 + eps) * ref))
        blocks.append((N, ok))
        N *= 2
    first_violation = next((n for n, ok in blocks if not ok), None)
    passes_from = None
    for n, ok in reversed(blocks):
        if not ok:
            break
        passes_from = n
    return OscillationReport(
        eps=eps, blocks=tuple(blocks), first_violation=first_violation, passes_from=passes_from
    )


@dataclass(frozen=True)
class LimitPointHistogram:
    """Equal-width half-open bins of d_n / f(p_n) over [0, range_hi)."""

    limit: int
    tag: str
    bins: int
    range_hi: float
    counts: np.ndarray
    underflow: int
    overflow: int
    min_value: float
    first_moment: float  # bin-midpoint estimate of the mean

    @property
    def bin_width(self) -> float:
        return self.range_hi / self.bins


def limit_point_histogram(
    limit: int, f: TestFunction, bins: int, range_hi: float
) -> LimitPointHistogram:
    """Histogram of normalized gaps; the exact minimum is reported unbinned.

    The (2, 3) gap is excluded: test functions are only required to be
    positive from 3 on.
    """
    if bins < 1:
        raise ValueError(f"need bins >= 1, got {bins}")
    if not range_hi > 0:
        raise ValueError(f"need range_hi > 0, got {range_hi}")
    lowers, gaps = _primes_and_gaps(limit)
    lowers, gaps = lowers[1:], gaps[1:]
    if len(gaps) == 0:
        raise ValueError("degenerate input: no usable gaps below limit")
    denom = f(lowers)
    if not np.all(denom > 0):
        raise ValueError("test function must be positive on the stream")
    values = gaps / denom
    width = range_hi / bins
    idx = np.floor(values / width).astype(np.int64) if math.isfinite(width) else np.zeros(len(values), np.int64)
    underflow = int(np.count_nonzero(values < 0))
    overflow = int(np.count_nonzero(idx >= bins))
    keep = (idx >= 0) & (idx < bins)
    counts = np.bincount(idx[keep], minlength=bins)[:bins]
    mids = (np.arange(bins) + 0.5) * width
    in_range = int(counts.sum())
    first_moment = float(np.dot(counts, mids) / in_range) if in_range and math.isfinite(width) else math.nan
    return LimitPointHistogram(
        limit=limit,
        tag=f.tag,
        bins=bins,
        range_hi=range_hi,
        counts=counts,
        underflow=underflow,
        overflow=overflow,
        min_value=float(values.min()),
        first_moment=first_moment,
    )


# ---------------------------------------------------------------------------
# gap-ratio extremes


@dataclass(frozen=True)
class RatioWitness:
    index: int  # n of the earlier gap
    prime: int  # p_n
    gap: int  # d_n
    next_gap: int  # d_{n+1}


@dataclass(frozen=True)
class RatioExtremes:
    limit: int
    min_ratio: float
    max_ratio: float
    min_ratio_scaled: float  # min of (d_{n+1}/d_n) * log p_n
    max_ratio_scaled: float  # max of (d_{n+1}/d_n) / log p_n
    min_witness: RatioWitness
    max_witness: RatioWitness
    min_scaled_witness: RatioWitness
    max_scaled_witness: RatioWitness


def ratio_extremes(limit: int) -> RatioExtremes:
    """Extremes of d_{n+1}/d_n and of its log-scaled variants, with witnesses."""
    lowers, gaps = _primes_and_gaps(limit)
    if len(gaps) < 2:
        raise ValueError(f"need at least two gaps below {limit}")
    ratios = gaps[1:].astype(np.float64) / gaps[:-1]
    logs = np.log(lowers[:-1].astype(np.float64))
    scaled_up = ratios * logs
    scaled_down = ratios / logs

    def witness(i: int) -> RatioWitness:
        return RatioWitness(
            index=i + 1, prime=int(lowers[i]), gap=int(gaps[i]), next_gap=int(gaps[i + 1])
        )

    i_min, i_max = int(np.argmin(ratios)), int(np.argmax(ratios))
    i_smin, i_smax = int(np.argmin(scaled_up)), int(np.argmax(scaled_down))
    return RatioExtremes(
        limit=limit,
        min_ratio=float(ratios[i_min]),
        max_ratio=float(ratios[i_max]),
        min_ratio_scaled=float(scaled_up[i_smin]),
        max_ratio_scaled=float(scaled_down[i_smax]),
        min_witness=witness(i_min),
        max_witness=witness(i_max),
        min_scaled_witness=witness(i_smin),
        max_scaled_witness=witness(i_smax),
    )


# ---------------------------------------------------------------------------
# censuses of even prime differences


@dataclass(frozen=True)
class EvenCensus:
    """Occurrence counts per even value 2, 4, ..., max_even (dense array
    indexed by half the value); ``overflow`` tallies larger even gaps."""

    kind: str  # "strong" (consecutive-prime gaps) or "weak" (any prime difference)
    limit: int
    max_even: int
    counts: np.ndarray
    overflow: int

    def count(self, even: int) -> int:
        if even % 2 != 0 or even < 2:
            raise ValueError(f"census is over positive even values, got {even}")
        if even > self.max_even:
            raise ValueError(f"{even} beyond census bound {self.max_even}")
        return int(self.counts[even // 2 - 1])

    def items(self) -> Iterator[tuple[int, int]]:
        for half, c in enumerate(self.counts, start=1):
            yield 2 * half, int(c)


def _check_census_args(limit: int, max_even: int) -> None:
    if max_even < 2 or max_even % 2 != 0:
        raise ValueError(f"max_even must be even and >= 2, got {max_even}")
    if limit < 3:
        raise ValueError(f"need limit >= 3, got {limit}")


def strong_polignac_census(limit: int, max_even: int) -> EvenCensus:
    """How often each even value occurs as a consecutive-prime gap below limit."""
    _check_census_args(limit, max_even)
    _, gaps = _primes_and_gaps(limit)
    even_gaps = gaps[gaps % 2 == 0]
    half = np.minimum(even_gaps // 2, max_even // 2 + 1)
    binned = np.bincount(half, minlength=max_even // 2 + 2)
    counts = binned[1 : max_even // 2 + 1].astype(np.int64)
    overflow = int(binned[max_even // 2 + 1])
    return EvenCensus(kind="strong", limit=limit, max_even=max_even, counts=counts, overflow=overflow)


def weak_polignac_census(limit: int, max_even: int) -> EvenCensus:
    """How often each even value occurs as a difference of primes <= limit."""
    _check_census_args(limit, max_even)
    mask = engine.prime_mask(limit)
    counts = np.zeros(max_even // 2, dtype=np.int64)
    for half in range(1, max_even // 2 + 1):
        diff = 2 * half
        if diff >= len(mask):
            break
        counts[half - 1] = int(np.count_nonzero(mask[diff:] & mask[: len(mask) - diff]))
    return EvenCensus(kind="weak", limit=limit, max_even=max_even, counts=counts, overflow=0)


# ---------------------------------------------------------------------------
# density of representable even values


@dataclass(frozen=True)
class DensityLowerBound:
    """(1/(k(k-1))) * prod_{p <= k} (1 - 1/p): the guaranteed asymptotic lower
    density of even values realized as the relevant prime differences, next to
    the large-k comparator exp(-gamma)/(k^2 log k)."""

    k: int
    value: float
    asymptote: float

    @cached_property
    def exact(self) -> Fraction:
        """Exact rational value (reduction cost grows quickly with k)."""
        primes = engine.base_primes(self.k)
        num = _product_tree([int(p) - 1 for p in primes])
        den = _product_tree([int(p) for p in primes]) * self.k * (self.k - 1)
        return Fraction(num, den)


def _product_tree(vals: list[int]) -> int:
    if not vals:
        return 1
    while len(vals) > 1:
        nxt = [vals[i] * vals[i + 1] for i in range(0, len(vals) - 1, 2)]
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return vals[0]


def polignac_density_lower(k: int) -> DensityLowerBound:
    """Density lower bound for tuples of size k >= 2 (float eagerly, exact
    rational on demand via ``.exact``)."""
    if k < 2:
        raise ValueError(f"need k >= 2, got {k}")
    primes = engine.base_primes(k).astype(np.float64)
    log_prod = float(np.sum(np.log1p(-1.0 / primes)))
    value = math.exp(log_prod - math.log(k) - math.log(k - 1))
    asymptote = math.exp(-np.euler_gamma) / (k * k * math.log(k))
    return DensityLowerBound(k=k, value=value, asymptote=asymptote)
