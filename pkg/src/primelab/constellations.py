"""Prime constellation counts against Hardy-Littlewood predictions, witnesses
with >= 2 primes per tuple (consecutiveness and rough-component flags),
arithmetic progressions of generalized twins, and equidistribution
discrepancies over residue classes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import engine, kernels
from .series import DEFAULT_TRUNCATION, singular_series
from .tuples import KTuple


def _log_power_integral(x: float, k: int, panels: int = 96, order: int = 48) -> float:
    """integral_2^x dt / log(t)^k via composite Gauss-Legendre in u = log t."""
    if x <= 2:
        return 0.0
    nodes, weights = np.polynomial.legendre.leggauss(order)
    a, b = math.log(2.0), math.log(x)
    edges = np.linspace(a, b, panels + 1)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid, half = (lo + hi) / 2.0, (hi - lo) / 2.0
        u = mid + half * nodes
        total += half * float(np.sum(weights * np.exp(u) / u**k))
    return total


@dataclass(frozen=True)
class ConstellationCount:
    tup: KTuple
    limit: int
    count: int
    series_value: float
    prediction_simple: float  # S(H) * x / log^k x
    prediction_integral: float  # S(H) * integral_2^x dt / log^k t


def count_constellations(
    tup: KTuple, x: int, series_truncation: int = DEFAULT_TRUNCATION
) -> ConstellationCount:
    """Count n <= x with every n + h prime, next to both density predictions."""
    x = int(x)
    if x < 2:
        raise ValueError(f"need x >= 2, got {x}")
    mask = engine.prime_mask(x + tup.diameter)
    hits = mask[tup.offsets[0] : x + 1 + tup.offsets[0]].copy()
    for h in tup.offsets[1:]:
        hits &= mask[h : x + 1 + h]
    count = int(np.count_nonzero(hits[1:]))  # n ranges over 1..x
    series = singular_series(tup, series_truncation).value
    k = tup.k
    simple = series * x / math.log(x) ** k
    integral = series * _log_power_integral(float(x), k)
    return ConstellationCount(
        tup=tup,
        limit=x,
        count=count,
        series_value=series,
        prediction_simple=simple,
        prediction_integral=integral,
    )


# ---------------------------------------------------------------------------
# witnesses with at least two primes among the shifted components


@dataclass(frozen=True)
class DHLWitness:
    n: int
    prime_positions: tuple[int, ...]  # 1-based indices i with n + h_i prime
    consecutive_pair: tuple[int, int] | None  # (i, j) whose primes are consecutive
    almost_prime: bool  # no component has a prime factor <= n^c1


def _rough_components(n: int, offsets: tuple[int, ...], c1: float) -> bool:
    bound = n**c1
    if bound < 2:
        return True
    for p in engine.base_primes(int(math.floor(bound))):
        p = int(p)
        for h in offsets:
            if (n + h) % p == 0:
                return False
    return True


def dhl_witnesses(tup: KTuple, N: int, c1: float = 0.05) -> list[DHLWitness]:
    """All n in [N, 2N) whose tuple carries >= 2 primes, with flags.

    ``consecutive_pair`` names the first adjacent pair of prime positions with
    no other prime anywhere between them (off-tuple positions included).
    """
    if not 0 < c1 < 0.5:
        raise ValueError(f"need 0 < c1 < 1/2, got {c1}")
    N = int(N)
    if N < 1:
        raise ValueError(f"need N >= 1, got {N}")
    top = 2 * N - 1 + tup.diameter
    mask = engine.prime_mask(top)
    length = N
    prime_counts = np.zeros(length, dtype=np.int16)
    for h in tup.offsets:
        prime_counts += mask[N + h : N + h + length]
    candidates = np.flatnonzero(prime_counts >= 2) + N

    prefix = np.cumsum(mask.astype(np.int64))
    witnesses = []
    for n in candidates.tolist():
        positions = tuple(i + 1 for i, h in enumerate(tup.offsets) if mask[n + h])
        pair = None
        for a, b in zip(positions, positions[1:]):
            lo = n + tup.offsets[a - 1]
            hi = n + tup.offsets[b - 1]
            # exactly the two endpoint primes in [lo, hi] means consecutive
            if prefix[hi] - prefix[lo - 1] == 2:
                pair = (a, b)
                break
        witnesses.append(
            DHLWitness(
                n=n,
                prime_positions=positions,
                consecutive_pair=pair,
                almost_prime=_rough_components(n, tup.offsets, c1),
            )
        )
    return witnesses


def consecutive_pair_count(tup: KTuple, i: int, j: int, N: int, c1: float) -> int:
    """Count n <= N with n+h_i, n+h_j prime and consecutive, and every
    component free of prime factors <= n^c1."""
    k = tup.k
    if not 1 <= i < j <= k:
        raise ValueError(f"need 1 <= i < j <= {k}, got i={i}, j={j}")
    if not 0 < c1 < 0.5:
        raise ValueError(f"need 0 < c1 < 1/2, got {c1}")
    N = int(N)
    if N < 1:
        return 0
    hi_off, hj_off = tup.offsets[i - 1], tup.offsets[j - 1]
    mask = engine.prime_mask(N + tup.diameter)
    prefix = np.cumsum(mask.astype(np.int64))

    ns = np.arange(1, N + 1)
    both = mask[ns + hi_off] & mask[ns + hj_off]
    # consecutive: the closed interval holds exactly its two endpoint primes
    span_counts = prefix[ns + hj_off] - prefix[ns + hi_off - 1]
    both &= span_counts == 2

    # strike n whose product picks up a prime p <= n^c1, i.e. n >= p^(1/c1)
    bound = N**c1
    if bound >= 2:
        small = engine.base_primes(int(math.floor(bound)))
        min_n = np.array(
            [_activation_floor(int(p), c1, N) for p in small], dtype=np.int64
        )
        offsets = np.array(tup.offsets, dtype=np.int64)
        rough = kernels.small_factor_mask(1, N, offsets, small.astype(np.int64), min_n)
        both &= ~rough
    return int(np.count_nonzero(both))


def _activation_floor(p: int, c1: float, n_top: int) -> int:
    # smallest n with p <= n^c1; beyond n_top the prime never activates
    try:
        lim = p ** (1.0 / c1)
    except OverflowError:
        return n_top + 1
    if lim > n_top:
        return n_top + 1
    return max(1, int(math.ceil(lim)))


# ---------------------------------------------------------------------------
# arithmetic progressions of generalized twin starts


@dataclass(frozen=True)
class TwinProgression:
    start: int
    step: int
    length: int

    @property
    def elements(self) -> tuple[int, ...]:
        return tuple(self.start + i * self.step for i in range(self.length))


def twin_ap_search(
    d: int, length: int, limit: int, require_consecutive: bool = True
) -> list[TwinProgression]:
    """All length-term progressions q, q+m, ... <= limit whose every element q
    has q and q+d prime (and q+d the next prime after q when required).

    Exhaustive over steps m >= 1; results sorted by (start, step).
    """
    if length < 3:
        raise ValueError(f"need progression length >= 3, got {length}")
    if d < 2 or d % 2 != 0:
        raise ValueError(f"need even d >= 2, got {d}")
    limit = int(limit)
    if limit < 2:
        return []
    mask = engine.prime_mask(limit + d)
    starts = np.flatnonzero(mask[: limit + 1] & mask[d : limit + 1 + d])
    if require_consecutive:
        prefix = np.cumsum(mask.astype(np.int64))
        keep = prefix[starts + d] - prefix[starts - 1] == 2
        starts = starts[keep]
    valid = set(starts.tolist())

    found = []
    for q in sorted(valid):
        max_step = (limit - q) // (length - 1)
        for m in range(1, max_step + 1):
            if all(q + t * m in valid for t in range(1, length)):
                found.append(TwinProgression(start=int(q), step=m, length=length))
    return found


# ---------------------------------------------------------------------------
# equidistribution discrepancy over residue classes


@dataclass(frozen=True)
class ResidueDeviation:
    q: int
    worst_residue: int
    deviation: float  # |theta(X; q, a) - X/phi(q)| at the worst coprime a


@dataclass(frozen=True)
class DiscrepancyReport:
    X: int
    Q: int
    per_q: tuple[ResidueDeviation, ...]
    total: float
    theta_exponent: float  # log Q / log X


def theta_residue_sums(X: int, q: int) -> np.ndarray:
    """theta(X; q, a) = sum of log p over primes p <= X with p = a mod q,
    for every residue a (coprime or not)."""
    if q < 1:
        raise ValueError(f"need q >= 1, got {q}")
    primes = engine.primes_up_to(X)
    logs = np.log(primes.astype(np.float64))
    return kernels.residue_log_sums(primes % q, logs, q)


def bv_discrepancy(X: int, Q: int) -> DiscrepancyReport:
    """Per-modulus worst-residue deviations of prime mass from X/phi(q),
    summed over q <= Q (the quantity behind distribution-level statements)."""
    X, Q = int(X), int(Q)
    if X < 100:
        raise ValueError(f"need X >= 100, got {X}")
    if not 1 <= Q <= X:
        raise ValueError(f"need 1 <= Q <= X, got Q={Q}")
    engine._require_budget(4 * Q * (Q + 1) + 16 * engine._estimated_prime_count(X),
                           f"residue accumulators to Q={Q}; use a smaller Q")
    primes = engine.primes_up_to(X)
    logs = np.log(primes.astype(np.float64))

    per_q = []
    total = 0.0
    for q in range(1, Q + 1):
        sums = kernels.residue_log_sums(primes % q, logs, q)
        coprime = np.gcd(np.arange(q), q) == 1
        main_term = X / engine.euler_phi(q)
        dev = np.abs(sums[coprime] - main_term)
        worst_local = int(np.argmax(dev))
        worst_residue = int(np.flatnonzero(coprime)[worst_local])
        per_q.append(ResidueDeviation(q=q, worst_residue=worst_residue, deviation=float(dev[worst_local])))
        total += float(dev[worst_local])
    return DiscrepancyReport(
        X=X,
        Q=Q,
        per_q=tuple(per_q),
        total=total,
        theta_exponent=math.log(Q) / math.log(X) if Q > 1 else 0.0,
    )
