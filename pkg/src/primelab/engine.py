"""Segmented prime sieving and multiplicative-function tables.

Everything downstream (tuple admissibility, singular series, sieve weights,
gap statistics) pulls its primes from here.  Tables are immutable after
construction (the backing arrays are marked read-only) and safe to share
across threads.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from . import kernels

MAX_INPUT = 1 << 62  # headroom so products of two in-range values stay in 2^124 < inf
DEFAULT_SEGMENT_ENTRIES = 1 << 20  # odd entries per segment, i.e. 2^21 integers
MEMORY_BUDGET_ENV = "PRIMELAB_MEMORY_BUDGET"
DEFAULT_MEMORY_BUDGET = 4 << 30  # bytes


class ResourceLimitError(RuntimeError):
    """An operation would exceed the configured memory budget."""


def memory_budget() -> int:
    """Current byte budget for tables (override via PRIMELAB_MEMORY_BUDGET)."""
    raw = os.environ.get(MEMORY_BUDGET_ENV, "").strip()
    if raw:
        return int(raw)
    return DEFAULT_MEMORY_BUDGET


def _require_budget(nbytes: int, what: str) -> None:
    budget = memory_budget()
    if nbytes > budget:
        raise ResourceLimitError(
            f"{what} needs about {nbytes} bytes, over the {budget}-byte budget"
            f" (set {MEMORY_BUDGET_ENV} to raise it)"
        )


def _check_value(x, name: str = "limit") -> int:
    x = int(x)
    if x > MAX_INPUT:
        raise ValueError(f"{name}={x} exceeds the supported range 2^62")
    return x


# ---------------------------------------------------------------------------
# base-prime cache (grown geometrically, shared by trial-division helpers)

_base_primes = np.array([2, 3, 5, 7], dtype=np.int64)
_base_limit = 10


def _odd_bitmap(limit: int) -> np.ndarray:
    """Primality bits for odd numbers 1,3,...<=limit (index j <-> 2j+1)."""
    half = (limit + 1) // 2
    bits = np.ones(half, dtype=np.bool_)
    bits[0] = False  # 1 is not prime
    for p in range(3, math.isqrt(limit) + 1, 2):
        if bits[p >> 1]:
            bits[p * p >> 1 :: p] = False
    return bits


def base_primes(limit: int) -> np.ndarray:
    """All primes <= limit from the shared cache, growing it if needed."""
    global _base_primes, _base_limit
    limit = _check_value(limit)
    if limit > _base_limit:
        new_limit = max(limit, 2 * _base_limit)
        _require_budget((new_limit + 1) // 2 + new_limit // 8, "base prime table")
        bits = _odd_bitmap(new_limit)
        odds = 2 * np.flatnonzero(bits) + 1
        _base_primes = np.concatenate((np.array([2], dtype=np.int64), odds)).astype(np.int64)
        _base_limit = new_limit
    return _base_primes[: int(np.searchsorted(_base_primes, limit, side="right"))]


def is_prime(n: int) -> bool:
    """Trial-division primality test (intended for argument validation)."""
    n = _check_value(int(n), "n")
    if n < 2:
        return False
    for p in base_primes(math.isqrt(n)):
        if p * p > n:
            break
        if n % p == 0:
            return False
    return True


# ---------------------------------------------------------------------------
# tables


@dataclass(frozen=True)
class SieveTables:
    """Primality (odd-packed), optional smallest-prime-factor and Mobius tables.

    The odd-only packing is internal; use :meth:`is_prime`, :meth:`primality`
    or :meth:`primes` instead of touching ``odd_bits``.
    """

    lo: int
    hi: int
    odd_bits: np.ndarray
    spf: np.ndarray | None = None
    mobius: np.ndarray | None = None

    @property
    def first_odd(self) -> int:
        return self.lo | 1

    def is_prime(self, m: int) -> bool:
        if not self.lo <= m < self.hi:
            raise ValueError(f"{m} outside table range [{self.lo}, {self.hi})")
        if m == 2:
            return True
        if m < 2 or m % 2 == 0:
            return False
        return bool(self.odd_bits[(m - self.first_odd) >> 1])

    def primality(self) -> np.ndarray:
        """Dense boolean array of length hi-lo; entry m-lo is the primality of m."""
        dense = np.zeros(self.hi - self.lo, dtype=np.bool_)
        dense[self.first_odd - self.lo :: 2] = self.odd_bits
        if self.lo <= 2 < self.hi:
            dense[2 - self.lo] = True
        return dense

    def primes(self) -> np.ndarray:
        """Prime values in [lo, hi), ascending."""
        odds = self.first_odd + 2 * np.flatnonzero(self.odd_bits).astype(np.int64)
        if self.lo <= 2 < self.hi:
            return np.concatenate((np.array([2], dtype=np.int64), odds))
        return odds


def _freeze(arr: np.ndarray | None) -> np.ndarray | None:
    if arr is not None:
        arr.setflags(write=False)
    return arr


def sieve_segment(lo: int, hi: int) -> SieveTables:
    """Exact primality table for the window [lo, hi), 2 <= lo < hi."""
    lo = _check_value(lo, "lo")
    hi = _check_value(hi, "hi")
    if lo >= hi:
        raise ValueError(f"empty segment: lo={lo} >= hi={hi}")
    if lo < 2:
        raise ValueError(f"segment start must be >= 2, got {lo}")
    _require_budget((hi - lo) // 2 + 16, f"segment [{lo}, {hi})")
    first_odd = lo | 1
    n_odd = max(0, (hi - first_odd + 1) // 2)
    bits = np.ones(n_odd, dtype=np.bool_)
    if n_odd:
        odd_base = base_primes(math.isqrt(hi - 1))[1:]
        kernels.mark_odd_composites(bits, first_odd, odd_base)
    tables = SieveTables(lo=lo, hi=hi, odd_bits=bits)
    _freeze(bits)
    return tables


def _spf_table(limit: int) -> np.ndarray:
    spf = np.zeros(limit + 1, dtype=np.int64)
    if limit >= 1:
        spf[1] = 1
    for p in base_primes(limit):
        sl = spf[p::p]
        sl[sl == 0] = p
    return spf


def _mobius_table(limit: int) -> np.ndarray:
    mu = np.ones(limit + 1, dtype=np.int8)
    mu[0] = 0
    for p in base_primes(limit):
        p = int(p)
        mu[p::p] *= -1
        sq = p * p
        if sq <= limit:
            mu[sq::sq] = 0
    return mu


def dense_tables(limit: int, with_spf: bool = False, with_mobius: bool = False) -> SieveTables:
    """Tables over [0, limit]; the smallest-prime-factor table only exists here."""
    limit = _check_value(limit)
    if limit < 1:
        raise ValueError("dense tables need limit >= 1")
    per_entry = 0.5 + (8 if with_spf else 0) + (1 if with_mobius else 0)
    _require_budget(int((limit + 1) * per_entry) + 16, f"dense tables to {limit}")
    bits = _odd_bitmap(limit)
    spf = _spf_table(limit) if with_spf else None
    mobius = _mobius_table(limit) if with_mobius else None
    tables = SieveTables(lo=0, hi=limit + 1, odd_bits=bits, spf=spf, mobius=mobius)
    _freeze(bits), _freeze(spf), _freeze(mobius)
    return tables


# ---------------------------------------------------------------------------
# prime streams


def _estimated_prime_count(x: int) -> int:
    if x < 17:
        return 8
    return int(x / (math.log(x) - 1.2)) + 16


def primes_up_to(x: int, segment_entries: int = DEFAULT_SEGMENT_ENTRIES) -> np.ndarray:
    """All primes <= x, ascending, as an int64 array."""
    x = _check_value(x)
    if x < 2:
        return np.empty(0, dtype=np.int64)
    _require_budget(8 * _estimated_prime_count(x) + segment_entries, f"primes to {x}")
    if x <= (1 << 24):
        bits = _odd_bitmap(x)
        odds = (2 * np.flatnonzero(bits) + 1).astype(np.int64)
        return np.concatenate((np.array([2], dtype=np.int64), odds))
    chunks = [np.array([2], dtype=np.int64)]
    lo = 3
    while lo <= x:
        hi = min(lo + 2 * segment_entries, x + 1)
        chunks.append(sieve_segment(lo, hi).primes())
        lo = hi
    return np.concatenate(chunks)


def prime_mask(limit: int) -> np.ndarray:
    """Read-only boolean array m -> [m is prime] for 0 <= m <= limit."""
    limit = _check_value(limit)
    if limit < 2:
        mask = np.zeros(limit + 1, dtype=np.bool_)
        mask.setflags(write=False)
        return mask
    _require_budget((limit + 1) + (limit + 1) // 2, f"prime mask to {limit}")
    bits = _odd_bitmap(limit)
    mask = np.zeros(limit + 1, dtype=np.bool_)
    mask[1::2] = bits
    mask[2] = True
    mask.setflags(write=False)
    return mask


# ---------------------------------------------------------------------------
# scalar arithmetic helpers


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization as ascending (prime, exponent) pairs; 1 -> []."""
    n = _check_value(n, "n")
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    out: list[tuple[int, int]] = []
    if n == 1:
        return out
    rest = n
    for p in base_primes(math.isqrt(n)):
        p = int(p)
        if p * p > rest:
            break
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            out.append((p, e))
    if rest > 1:
        out.append((rest, 1))
    return out


def smallest_prime_factor_bounded(m: int, bound: int) -> int | None:
    """Least prime p <= bound dividing m, or None when every prime factor exceeds bound."""
    m = _check_value(m, "m")
    bound = _check_value(bound, "bound")
    if m < 2:
        raise ValueError(f"need m >= 2, got {m}")
    if bound < 2:
        raise ValueError(f"need bound >= 2, got {bound}")
    root = math.isqrt(m)
    for p in base_primes(min(bound, root)):
        if m % p == 0:
            return int(p)
    if bound >= root:
        # no prime <= sqrt(m) divides m, so m itself is prime
        return m if m <= bound else None
    return None


def euler_phi(q: int) -> int:
    """Count of residues mod q coprime to q."""
    q = _check_value(q, "q")
    if q < 1:
        raise ValueError(f"euler_phi needs q >= 1, got {q}")
    phi = 1
    for p, e in factorize(q):
        phi *= (p - 1) * p ** (e - 1)
    return phi
