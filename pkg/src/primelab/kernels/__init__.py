"""Hot-kernel dispatch: numba-jitted loops by default, pure numpy on request.

Set ``PRIMELAB_PURE_NUMPY=1`` to force the vectorized numpy fallback; the
fallback is also used automatically when numba is not importable.  Both
backends expose the same functions with identical numeric results.
"""
from __future__ import annotations

import os

import numpy as np

PURE_NUMPY_ENV = "PRIMELAB_PURE_NUMPY"

__all__ = [
    "BACKEND",
    "PURE_NUMPY_ENV",
    "mark_odd_composites",
    "prime_hit_rows",
    "small_factor_mask",
    "divisor_weight_block",
    "residue_log_sums",
    "warmup",
]


def _pure_numpy_requested() -> bool:
    return os.environ.get(PURE_NUMPY_ENV, "").strip().lower() in {"1", "true", "yes", "on"}


if _pure_numpy_requested():
    from . import numpy_impl as _impl
else:
    try:
        from . import numba_impl as _impl  # type: ignore[no-redef]
    except ImportError:
        from . import numpy_impl as _impl  # type: ignore[no-redef]

BACKEND = _impl.BACKEND
mark_odd_composites = _impl.mark_odd_composites
prime_hit_rows = _impl.prime_hit_rows
small_factor_mask = _impl.small_factor_mask
divisor_weight_block = _impl.divisor_weight_block
residue_log_sums = _impl.residue_log_sums


def warmup() -> str:
    """Run every kernel once on tiny inputs (triggers JIT compilation)."""
    bits = np.ones(8, dtype=np.bool_)
    mark_odd_composites(bits, 3, np.array([3, 5], dtype=np.int64))
    offs = np.array([0, 2], dtype=np.int64)
    primes = np.array([2, 3], dtype=np.int64)
    rows = prime_hit_rows(10, 16, offs, primes)
    small_factor_mask(10, 16, offs, primes, np.zeros(2, dtype=np.int64))
    divisor_weight_block(
        rows,
        np.array([0, 0, 1], dtype=np.int64),
        np.array([0], dtype=np.int64),
        np.array([1.0, -0.5]),
    )
    residue_log_sums(np.array([0, 1, 1], dtype=np.int64), np.array([1.0, 2.0, 3.0]), 3)
    return BACKEND
