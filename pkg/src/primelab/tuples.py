"""Admissible k-tuples: representation, testing, and construction.

A tuple of offsets is admissible when its residues never exhaust all classes
modulo any prime; only primes p <= k need checking, larger ones cannot be
covered by k distinct offsets.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import engine


@dataclass(frozen=True)
class KTuple:
    """Sorted distinct non-negative offsets, normalized so the first is 0.

    ``base`` preserves the original placement when a tuple was constructed
    from absolute positions (e.g. interval-constrained construction).
    """

    offsets: tuple[int, ...]
    base: int = 0

    def __post_init__(self) -> None:
        if not self.offsets:
            raise ValueError("a tuple needs at least one offset")
        if self.offsets[0] != 0:
            raise ValueError("offsets must be normalized to start at 0 (use from_offsets)")
        if self.base < 0:
            raise ValueError("base offset must be non-negative")
        for a, b in zip(self.offsets, self.offsets[1:]):
            if b <= a:
                raise ValueError(f"offsets must be strictly increasing, got {self.offsets}")

    @classmethod
    def from_offsets(cls, raw: Iterable[int]) -> "KTuple":
        """Build from ascending distinct offsets; the smallest becomes the base."""
        vals = [int(v) for v in raw]
        if not vals:
            raise ValueError("a tuple needs at least one offset")
        if any(v < 0 for v in vals):
            raise ValueError(f"offsets must be non-negative, got {vals}")
        for a, b in zip(vals, vals[1:]):
            if b <= a:
                raise ValueError(f"offsets must be strictly increasing, got {vals}")
        base = vals[0]
        return cls(offsets=tuple(v - base for v in vals), base=base)

    @property
    def k(self) -> int:
        return len(self.offsets)

    @property
    def diameter(self) -> int:
        return self.offsets[-1] - self.offsets[0]

    def absolute(self) -> tuple[int, ...]:
        return tuple(self.base + h for h in self.offsets)

    def __len__(self) -> int:
        return len(self.offsets)

    def __iter__(self):
        return iter(self.offsets)


def parse_offsets(text: str, normalize: bool = False) -> KTuple:
    """Parse the one-line exchange format '0,2,6' (ascending offsets).

    Out-of-order or repeated entries are rejected unless ``normalize`` is
    set, which sorts and deduplicates explicitly.
    """
    try:
        vals = [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise ValueError(f"malformed tuple {text!r}: {exc}") from None
    if not vals:
        raise ValueError(f"malformed tuple {text!r}: no offsets")
    if normalize:
        vals = sorted(set(vals))
    return KTuple.from_offsets(vals)


def format_offsets(tup: KTuple, absolute: bool = False) -> str:
    vals = tup.absolute() if absolute else tup.offsets
    return ",".join(str(v) for v in vals)


def residues_covered(tup: KTuple, p: int) -> int:
    """Number of distinct residue classes mod p occupied by the offsets."""
    if not engine.is_prime(p):
        raise ValueError(f"modulus must be prime, got {p}")
    return len({h % p for h in tup.offsets})


@dataclass(frozen=True)
class AdmissibilityResult:
    admissible: bool
    witness: int | None  # least prime whose residues are fully covered

    def __bool__(self) -> bool:
        return self.admissible


def is_admissible(tup: KTuple) -> AdmissibilityResult:
    """Check that no prime p <= k has all its residue classes covered."""
    for p in engine.base_primes(tup.k):
        p = int(p)
        if len({h % p for h in tup.offsets}) == p:
            return AdmissibilityResult(False, p)
    return AdmissibilityResult(True, None)


# ---------------------------------------------------------------------------
# narrow tuple construction

STRATEGIES = ("greedy-sieve", "primes-past-k", "shifted-schinzel")


def _greedy_sieve_tuple(k: int) -> KTuple:
    # For each prime p <= k remove the residue class with the fewest
    # survivors (ties -> smallest residue); deterministic and near-narrow.
    span = max(8, 4 * k)
    small_primes = engine.base_primes(k)
    while True:
        alive = np.ones(span + 1, dtype=np.bool_)
        for p in small_primes:
            p = int(p)
            residues = np.arange(span + 1) % p
            counts = np.bincount(residues[alive], minlength=p)
            drop = int(np.argmin(counts))
            alive &= residues != drop
        survivors = np.flatnonzero(alive)
        if len(survivors) >= k:
            return KTuple.from_offsets(survivors[:k].tolist())
        span *= 2


def _primes_past_k_tuple(k: int) -> KTuple:
    # k consecutive primes starting at the k-th prime; every element exceeds
    # every prime p <= k, so residue 0 mod p stays uncovered.
    bound = max(16, int(2 * k * (math.log(2 * k) + math.log(max(math.log(2 * k), 2)))) + 8)
    primes = engine.base_primes(bound)
    while len(primes) < 2 * k:
        bound *= 2
        primes = engine.base_primes(bound)
    return KTuple.from_offsets(primes[k - 1 : 2 * k - 1].tolist())


def _shifted_schinzel_tuple(k: int) -> KTuple:
    # survivors of striking residue 0 mod every p <= k from [1, span]
    span = max(8, 4 * k)
    small_primes = engine.base_primes(k)
    while True:
        alive = np.ones(span + 1, dtype=np.bool_)
        alive[0] = False
        for p in small_primes:
            alive[:: int(p)] = False
        survivors = np.flatnonzero(alive)
        if len(survivors) >= k:
            return KTuple.from_offsets(survivors[:k].tolist())
        span *= 2


def narrow_admissible_tuple(k: int, strategy: str = "greedy-sieve") -> KTuple:
    """Deterministic admissible k-tuple; diameter depends on the strategy."""
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    if strategy == "greedy-sieve":
        return _greedy_sieve_tuple(k)
    if strategy == "primes-past-k":
        return _primes_past_k_tuple(k)
    if strategy == "shifted-schinzel":
        return _shifted_schinzel_tuple(k)
    raise ValueError(f"unknown strategy {strategy!r}; pick one of {STRATEGIES}")


# ---------------------------------------------------------------------------
# interval-constrained construction


@dataclass(frozen=True)
class IntervalChain:
    """Disjoint increasing integer intervals [start, end] (inclusive)."""

    intervals: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if not self.intervals:
            raise ValueError("interval chain must be non-empty")
        prev_end = -1
        for lo, hi in self.intervals:
            if lo < 0 or hi <= lo:
                raise ValueError(f"bad interval [{lo}, {hi}]")
            if lo <= prev_end:
                raise ValueError("intervals must be disjoint and increasing")
            prev_end = hi

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[int, int]]) -> "IntervalChain":
        return cls(tuple((int(a), int(b)) for a, b in pairs))

    @property
    def k(self) -> int:
        return len(self.intervals)

    def growth_condition_ok(self) -> bool:
        """start > length for each interval and length > 4 * previous start."""
        prev_start = None
        for lo, hi in self.intervals:
            length = hi - lo
            if lo <= length:
                return False
            if prev_start is not None and length <= 4 * prev_start:
                return False
            prev_start = lo
        return True


@dataclass(frozen=True)
class IntervalTupleResult:
    tup: KTuple
    differences_contained: bool  # h_j - h_i lands inside interval j for all i < j


def tuple_in_intervals(chain: IntervalChain) -> IntervalTupleResult:
    """Pick one offset from the upper half of each interval so the whole
    selection is admissible; backtracks at most once per interval.

    Raises ValueError("insufficient interval length ...") when the greedy
    selection exhausts an interval.
    """
    k = chain.k
    check_primes = [int(p) for p in engine.base_primes(k)]
    # upper-half candidate ranges, inclusive
    ranges = [(lo + (hi - lo + 1) // 2, hi) for lo, hi in chain.intervals]

    chosen: list[int] = []
    cursor = [r[0] for r in ranges]
    retries = [0] * k
    idx = 0
    while idx < k:
        lo_c, hi_c = ranges[idx]
        pos = cursor[idx]
        found = None
        while pos <= hi_c:
            trial = chosen + [pos]
            ok = True
            for p in check_primes:
                if len({h % p for h in trial}) == p:
                    ok = False
                    break
            if ok:
                found = pos
                break
            pos += 1
        if found is None:
            if idx > 0 and retries[idx] == 0:
                # one backtrack: advance the previous choice and retry here
                retries[idx] = 1
                cursor[idx] = lo_c
                idx -= 1
                cursor[idx] = chosen.pop() + 1
                continue
            raise ValueError(
                f"insufficient interval length: no admissible choice in "
                f"[{lo_c}, {hi_c}] (interval {idx + 1} of {k})"
            )
        chosen.append(found)
        cursor[idx] = found
        idx += 1

    tup = KTuple.from_offsets(chosen)
    contained = True
    for j in range(1, k):
        lo_j, hi_j = chain.intervals[j]
        for i in range(j):
            if not lo_j <= chosen[j] - chosen[i] <= hi_j:
                contained = False
    return IntervalTupleResult(tup=tup, differences_contained=contained)


def within_log_window(tup: KTuple, n: int, epsilon: float) -> bool:
    """Whether the tuple diameter fits the window epsilon * log n."""
    if n < 3 or epsilon <= 0:
        raise ValueError("need n >= 3 and epsilon > 0")
    return tup.diameter <= epsilon * math.log(n)
