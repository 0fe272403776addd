"""Truncated singular-series evaluation with rigorous tail bounds.

The singular series of an offset tuple H is the Euler product over primes of
(1 - nu_p/p) * (1 - 1/p)^(-k), where nu_p counts residue classes covered by
H mod p.  It is positive exactly when H is admissible and equals the
Hardy-Littlewood density constant for the constellation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import engine
from .tuples import KTuple, is_admissible

DEFAULT_TRUNCATION = 10**6
GALLAGHER_TRUNCATION = 10**4


@dataclass(frozen=True)
class SeriesValue:
    """Truncated product value plus a bound on |true - value| from the tail."""

    value: float
    tail_bound: float
    truncation_prime: int

    def __post_init__(self) -> None:
        if self.value < 0 or self.tail_bound < 0:
            raise ValueError("series value and tail bound must be non-negative")


def _tail_log_sum_bound(k: int, trunc: int) -> float:
    # For p > max(2k, diameter) each log-factor is below 2k^2/p^2 in absolute
    # value, and sum_{p > P} 1/p^2 < 1/(P log P).
    return 2.0 * k * k / (trunc * math.log(trunc))


def _min_truncation(tup: KTuple) -> int:
    return max(tup.diameter + 2, 2 * tup.k, 3)


def singular_series(tup: KTuple, truncation_prime: int = DEFAULT_TRUNCATION) -> SeriesValue:
    """Euler product over p <= truncation_prime, with tail bound.

    An inadmissible tuple vanishes exactly (value 0, tail 0) for any
    truncation.  A singleton has every factor equal to 1, so the value is
    exactly 1 with tail 0.  Otherwise truncation_prime must be at least
    max(diameter + 2, 2k) so every omitted prime covers exactly k residues
    and the tail estimate applies.
    """
    trunc = int(truncation_prime)
    if trunc < 2:
        raise ValueError(f"truncation prime must be >= 2, got {trunc}")
    k = tup.k
    if k == 1:
        return SeriesValue(value=1.0, tail_bound=0.0, truncation_prime=trunc)
    cutoff = max(tup.diameter, k)

    # vanishing factors decide the value exactly, before any tail concern
    small_cover: list[tuple[int, int]] = []
    for p in engine.base_primes(cutoff):
        p = int(p)
        covered = len({h % p for h in tup.offsets})
        if covered == p:
            return SeriesValue(value=0.0, tail_bound=0.0, truncation_prime=trunc)
        small_cover.append((p, covered))

    if trunc < _min_truncation(tup):
        raise ValueError(
            f"truncation prime {trunc} below the minimum {_min_truncation(tup)} "
            f"for this tuple (diameter {tup.diameter}, k {tup.k})"
        )

    log_total = 0.0
    for p, covered in small_cover:
        log_total += math.log1p(-covered / p) - k * math.log1p(-1.0 / p)
    primes = engine.primes_up_to(trunc)
    large = primes[int(np.searchsorted(primes, cutoff, side="right")) :].astype(np.float64)
    if large.size:
        log_total += float(np.sum(np.log1p(-k / large) - k * np.log1p(-1.0 / large)))

    value = math.exp(log_total)
    tail_bound = value * math.expm1(_tail_log_sum_bound(k, trunc))
    return SeriesValue(value=value, tail_bound=tail_bound, truncation_prime=trunc)


def gallagher_average(
    tup: KTuple,
    hmax: int,
    truncation_prime: int = GALLAGHER_TRUNCATION,
) -> float:
    """Mean over h = 1..hmax of the ratio series(H + {h}) / series(H).

    Terms where the extended tuple is inadmissible contribute 0; terms where
    h is already an offset of H are skipped while the divisor stays hmax.
    Both numerator and denominator are truncated at the same prime, so the
    per-term truncation error largely cancels.
    """
    hmax = int(hmax)
    if hmax < 1:
        raise ValueError(f"need hmax >= 1, got {hmax}")
    verdict = is_admissible(tup)
    if not verdict:
        raise ValueError(f"tuple is inadmissible (witness prime {verdict.witness})")
    trunc = int(truncation_prime)
    if trunc < 3:
        raise ValueError(f"truncation prime {trunc} below the minimum 3")

    primes = engine.primes_up_to(trunc)
    offsets = tup.offsets

    # log ratio per h decomposes over primes:
    #   collision (h occupies an existing class mod p): -log(1 - 1/p)
    #   new class: log(1 - (nu+1)/p) - log(1 - nu/p) - log(1 - 1/p)
    # When nu + 1 == p a new class kills the product entirely.
    log_ratio = np.zeros(hmax + 1, dtype=np.float64)
    vanished = np.zeros(hmax + 1, dtype=np.bool_)
    base_sum = 0.0
    for p in primes:
        p = int(p)
        residues = sorted({h % p for h in offsets})
        nu = len(residues)
        log_one = math.log1p(-1.0 / p)
        collide_term = -log_one
        if nu + 1 >= p:
            # only colliding h keep the product alive for this prime
            collide = np.zeros(hmax + 1, dtype=np.bool_)
            for r in residues:
                first = r if r >= 1 else p
                collide[first::p] = True
            vanished |= ~collide
            log_ratio[collide] += collide_term
        else:
            new_term = math.log1p(-(nu + 1) / p) - math.log1p(-nu / p) - log_one
            base_sum += new_term
            for r in residues:
                first = r if r >= 1 else p
                log_ratio[first::p] += collide_term - new_term

    log_ratio += base_sum
    ratios = np.where(vanished, 0.0, np.exp(log_ratio))
    ratios[0] = 0.0
    skip = [h for h in offsets if 1 <= h <= hmax]
    for h in skip:
        ratios[h] = 0.0
    return float(np.sum(ratios[1:]) / hmax)
