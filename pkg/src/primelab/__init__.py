"""primelab: prime constellations, admissible tuples, singular series,
divisor-sum sieve weights, and consecutive-prime gap statistics."""

__version__ = "0.1.0"

from .engine import (
    ResourceLimitError,
    SieveTables,
    dense_tables,
    euler_phi,
    factorize,
    primes_up_to,
    sieve_segment,
    smallest_prime_factor_bounded,
)
from .tuples import (
    IntervalChain,
    KTuple,
    is_admissible,
    narrow_admissible_tuple,
    residues_covered,
    tuple_in_intervals,
)
from .series import SeriesValue, gallagher_average, singular_series
from .weights import WeightParams, lambda_r, lemma1_ratio, rough_sum_fraction, selberg_survivor_count, weighted_sum
from .gaps import (
    TestFunction,
    gap_stream,
    limit_point_histogram,
    mean_normalized_gap,
    polignac_density_lower,
    ratio_extremes,
    slow_oscillation_check,
    strong_polignac_census,
    weak_polignac_census,
)
from .constellations import (
    DHLWitness,
    DiscrepancyReport,
    bv_discrepancy,
    consecutive_pair_count,
    count_constellations,
    dhl_witnesses,
    twin_ap_search,
)

__all__ = [
    "__version__",
    "ResourceLimitError",
    "SieveTables",
    "dense_tables",
    "euler_phi",
    "factorize",
    "primes_up_to",
    "sieve_segment",
    "smallest_prime_factor_bounded",
    "IntervalChain",
    "KTuple",
    "is_admissible",
    "narrow_admissible_tuple",
    "residues_covered",
    "tuple_in_intervals",
    "SeriesValue",
    "gallagher_average",
    "singular_series",
    "WeightParams",
    "lambda_r",
    "lemma1_ratio",
    "rough_sum_fraction",
    "selberg_survivor_count",
    "weighted_sum",
    "TestFunction",
    "gap_stream",
    "limit_point_histogram",
    "mean_normalized_gap",
    "polignac_density_lower",
    "ratio_extremes",
    "slow_oscillation_check",
    "strong_polignac_census",
    "weak_polignac_census",
    "DHLWitness",
    "DiscrepancyReport",
    "bv_discrepancy",
    "consecutive_pair_count",
    "count_constellations",
    "dhl_witnesses",
    "twin_ap_search",
]
