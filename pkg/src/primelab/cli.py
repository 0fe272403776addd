"""Command-line entry point: every operation as a subcommand with
machine-readable output and a run manifest.

Output goes to stdout as JSON (default; one object per line for record
streams, a bare value for scalar statistics) or CSV; the manifest, with the
full parameter map and an output checksum, goes to stderr or --manifest FILE.
Exit codes: 0 success, 2 argument error, 3 resource limit.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
import time
from typing import Any, Sequence

from . import __version__, constellations, engine, gaps, series, tuples, weights

SUBCOMMANDS = (
    "sieve", "tuple", "series", "gallagher", "weights", "lemma1", "lemma2",
    "lemma3", "gaps", "histogram", "ratios", "polignac", "density",
    "constellations", "dhl", "consecutive", "ap-search", "bv",
)


def _parse_window(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like 'pmin:pmax', got {text!r}")


def _parse_intervals(text: str) -> list[tuple[int, int]]:
    pairs = []
    for part in text.split(","):
        lo, _, hi = part.partition(":")
        pairs.append((int(lo), int(hi)))
    return pairs


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="primelab", description=__doc__)
    top.add_argument("--version", action="version", version=f"primelab {__version__}")
    sub = top.add_subparsers(dest="subcommand", required=True)

    def add(name: str, **kwargs) -> argparse.ArgumentParser:
        p = sub.add_parser(name, **kwargs)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--manifest", metavar="FILE", default=None,
                       help="write the run manifest here instead of stderr")
        p.add_argument("--threads", type=int, default=None,
                       help="cap worker parallelism (results never depend on it)")
        return p

    p = add("sieve", help="primes up to a limit, or an exact segment")
    p.add_argument("--limit", type=int)
    p.add_argument("--lo", type=int)
    p.add_argument("--hi", type=int)
    p.add_argument("--count-only", action="store_true")

    p = add("tuple", help="check admissibility or construct tuples")
    p.add_argument("--check", metavar="OFFSETS")
    p.add_argument("--narrow", type=int, metavar="K")
    p.add_argument("--strategy", choices=tuples.STRATEGIES, default="greedy-sieve")
    p.add_argument("--intervals", metavar="LO:HI,LO:HI,...")
    p.add_argument("--normalize", action="store_true",
                   help="sort/deduplicate --check input instead of rejecting it")

    p = add("series", help="truncated singular series with tail bound")
    p.add_argument("--tuple", required=True, dest="offsets")
    p.add_argument("--trunc", type=int, default=series.DEFAULT_TRUNCATION)
    p.add_argument("--normalize", action="store_true")

    p = add("gallagher", help="average of extension ratios of the singular series")
    p.add_argument("--tuple", required=True, dest="offsets")
    p.add_argument("--hmax", type=int, required=True)
    p.add_argument("--trunc", type=int, default=series.GALLAGHER_TRUNCATION)

    def weight_args(p, with_n=False):
        p.add_argument("--tuple", required=True, dest="offsets")
        p.add_argument("--ell", type=int, default=0)
        p.add_argument("--R", type=float, default=None, dest="cutoff")
        p.add_argument("--R-exponent", type=float, default=None, dest="cutoff_exponent",
                       help="use R = N^exponent")
        p.add_argument("--window", type=_parse_window, default=None)
        p.add_argument("--N", type=int, required=not with_n)

    p = add("weights", help="divisor-sum weight at one n, or its squared sum over [N, 2N)")
    weight_args(p, with_n=True)
    p.add_argument("--n", type=int, default=None)

    p = add("lemma1", help="weighted-mass ratio restricted to p | prod(n+h)")
    weight_args(p)
    p.add_argument("--p", type=int, required=True)

    p = add("lemma2", help="weighted-mass fraction with a small prime factor below R^eta")
    weight_args(p)
    p.add_argument("--eta", type=float, required=True)

    p = add("lemma3", help="survivors of sieving by primes up to N^alpha")
    p.add_argument("--tuple", required=True, dest="offsets")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)

    p = add("gaps", help="gap stream or scalar gap statistics")
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--stat", choices=("stream", "mean", "count"), default="stream")
    p.add_argument("--normalizer", choices=("prime", "index"), default="prime")

    p = add("histogram", help="histogram of gaps normalized by a test function")
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--fn", choices=sorted(gaps.BUILTIN_TEST_FUNCTIONS), default="log")
    p.add_argument("--bins", type=int, default=100)
    p.add_argument("--range-hi", type=float, default=10.0)

    p = add("ratios", help="extremes of consecutive gap ratios")
    p.add_argument("--limit", type=int, required=True)

    p = add("polignac", help="census of even values as prime differences")
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--max-even", type=int, required=True)
    p.add_argument("--kind", choices=("strong", "weak"), default="strong")

    p = add("density", help="lower density bound for realized even differences")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--exact", action="store_true",
                   help="include the exact fraction (slow for large k)")

    p = add("constellations", help="tuple constellation count vs predictions")
    p.add_argument("--tuple", required=True, dest="offsets")
    p.add_argument("--limit", type=int, required=True)

    p = add("dhl", help="n in [N, 2N) with >= 2 primes in the tuple")
    p.add_argument("--tuple", required=True, dest="offsets")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--c1", type=float, default=0.05)

    p = add("consecutive", help="count of consecutive-prime pairs at positions i, j")
    p.add_argument("--tuple", required=True, dest="offsets")
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--c1", type=float, default=0.05)

    p = add("ap-search", help="arithmetic progressions of generalized twin starts")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--length", type=int, default=3)
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--require-consecutive", action="store_true")

    p = add("bv", help="worst-residue prime-mass deviations summed over moduli")
    p.add_argument("--X", type=int, required=True)
    p.add_argument("--Q", type=int, required=True)

    return top


# ---------------------------------------------------------------------------
# handlers: each returns (records, scalar); exactly one is non-None


def _tuple_from(args, attr="offsets", normalize=False) -> tuples.KTuple:
    return tuples.parse_offsets(getattr(args, attr), normalize=normalize)


def _resolve_cutoff(args) -> float:
    if (args.cutoff is None) == (args.cutoff_exponent is None):
        raise ValueError("give exactly one of --R or --R-exponent")
    if args.cutoff is not None:
        return args.cutoff
    if args.N is None:
        raise ValueError("--R-exponent needs --N")
    return float(args.N) ** args.cutoff_exponent


def _weight_params(args) -> weights.WeightParams:
    return weights.WeightParams(
        tup=_tuple_from(args), ell=args.ell, cutoff=_resolve_cutoff(args),
        divisor_window=args.window,
    )


def _run_sieve(args):
    if args.lo is not None or args.hi is not None:
        if args.lo is None or args.hi is None:
            raise ValueError("segment mode needs both --lo and --hi")
        tables = engine.sieve_segment(args.lo, args.hi)
        primes = tables.primes()
        if args.count_only:
            return None, {"lo": args.lo, "hi": args.hi, "count": int(len(primes))}
        return [{"p": int(p)} for p in primes], None
    if args.limit is None:
        raise ValueError("give --limit, or --lo/--hi for a segment")
    primes = engine.primes_up_to(args.limit)
    if args.count_only:
        return None, {"limit": args.limit, "count": int(len(primes))}
    return [{"p": int(p)} for p in primes], None


def _run_tuple(args):
    modes = [m for m in (args.check, args.narrow, args.intervals) if m is not None]
    if len(modes) != 1:
        raise ValueError("give exactly one of --check, --narrow, --intervals")
    if args.check is not None:
        tup = _tuple_from(args, "check", normalize=args.normalize)
        verdict = tuples.is_admissible(tup)
        return None, {
            "offsets": tuples.format_offsets(tup),
            "k": tup.k,
            "diameter": tup.diameter,
            "admissible": verdict.admissible,
            "witness": verdict.witness,
        }
    if args.narrow is not None:
        tup = tuples.narrow_admissible_tuple(args.narrow, args.strategy)
        return None, {
            "k": tup.k,
            "strategy": args.strategy,
            "offsets": tuples.format_offsets(tup),
            "diameter": tup.diameter,
            "admissible": tuples.is_admissible(tup).admissible,
        }
    chain = tuples.IntervalChain.from_pairs(_parse_intervals(args.intervals))
    result = tuples.tuple_in_intervals(chain)
    return None, {
        "offsets": tuples.format_offsets(result.tup, absolute=True),
        "base": result.tup.base,
        "diameter": result.tup.diameter,
        "growth_condition": chain.growth_condition_ok(),
        "differences_contained": result.differences_contained,
    }


def _run_series(args):
    tup = _tuple_from(args, normalize=args.normalize)
    val = series.singular_series(tup, args.trunc)
    return None, {
        "offsets": tuples.format_offsets(tup),
        "truncation_prime": val.truncation_prime,
        "value": val.value,
        "tail_bound": val.tail_bound,
    }


def _run_gallagher(args):
    tup = _tuple_from(args)
    avg = series.gallagher_average(tup, args.hmax, args.trunc)
    return None, {
        "offsets": tuples.format_offsets(tup),
        "hmax": args.hmax,
        "truncation_prime": args.trunc,
        "average": avg,
    }


def _run_weights(args):
    params = _weight_params(args)
    base = {
        "offsets": tuples.format_offsets(params.tup),
        "ell": params.ell,
        "cutoff": params.cutoff,
        "window": None if params.divisor_window is None else f"{params.divisor_window[0]}:{params.divisor_window[1]}",
    }
    if args.n is not None:
        return None, {**base, "n": args.n, "weight": weights.lambda_r(args.n, params)}
    if args.N is None:
        raise ValueError("give --n for a single weight or --N for the squared sum")
    return None, {**base, "N": args.N, "sum": weights.weighted_sum(args.N, params)}


def _run_lemma1(args):
    params = _weight_params(args)
    res = weights.lemma1_ratio(args.N, params, args.p)
    return None, {
        "offsets": tuples.format_offsets(params.tup),
        "ell": params.ell,
        "cutoff": params.cutoff,
        "N": args.N,
        "p": args.p,
        "sum": res.full_sum,
        "restricted_sum": res.restricted_sum,
        "ratio": res.ratio,
        "bound": res.bound,
        "constant": res.constant,
    }


def _run_lemma2(args):
    params = _weight_params(args)
    frac = weights.rough_sum_fraction(args.N, params, args.eta)
    return None, {
        "offsets": tuples.format_offsets(params.tup),
        "ell": params.ell,
        "cutoff": params.cutoff,
        "N": args.N,
        "eta": args.eta,
        "fraction": frac,
    }


def _run_lemma3(args):
    tup = _tuple_from(args)
    res = weights.selberg_survivor_count(args.N, tup, args.alpha)
    return None, {
        "offsets": tuples.format_offsets(tup),
        "N": args.N,
        "alpha": args.alpha,
        "count": res.count,
        "bound_scale": res.bound_scale,
        "ratio": res.ratio,
    }


def _run_gaps(args):
    if args.stat == "mean":
        return None, gaps.mean_normalized_gap(args.limit, args.normalizer)
    if args.stat == "count":
        return None, sum(1 for _ in gaps.gap_stream(args.limit))
    records = [
        {"n": r.index, "p": r.prime, "gap": r.gap} for r in gaps.gap_stream(args.limit)
    ]
    return records, None


def _run_histogram(args):
    if not math.isfinite(args.range_hi):
        raise ValueError("--range-hi must be finite")
    fn = gaps.BUILTIN_TEST_FUNCTIONS[args.fn]()
    hist = gaps.limit_point_histogram(args.limit, fn, args.bins, args.range_hi)
    rows: list[dict[str, Any]] = [
        {
            "kind": "bin",
            "lo": i * hist.bin_width,
            "hi": (i + 1) * hist.bin_width,
            "count": int(c),
        }
        for i, c in enumerate(hist.counts)
    ]
    rows.append(
        {
            "kind": "summary",
            "lo": hist.underflow,
            "hi": hist.overflow,
            "count": int(hist.counts.sum()),
        }
    )
    rows.append({"kind": "min-value", "lo": hist.min_value, "hi": None, "count": None})
    return rows, None


def _run_ratios(args):
    res = gaps.ratio_extremes(args.limit)

    def wit(w: gaps.RatioWitness) -> str:
        return f"n={w.index},p={w.prime},gap={w.gap},next={w.next_gap}"

    return None, {
        "limit": res.limit,
        "min_ratio": res.min_ratio,
        "max_ratio": res.max_ratio,
        "min_ratio_scaled": res.min_ratio_scaled,
        "max_ratio_scaled": res.max_ratio_scaled,
        "min_witness": wit(res.min_witness),
        "max_witness": wit(res.max_witness),
        "min_scaled_witness": wit(res.min_scaled_witness),
        "max_scaled_witness": wit(res.max_scaled_witness),
    }


def _run_polignac(args):
    census = (
        gaps.strong_polignac_census(args.limit, args.max_even)
        if args.kind == "strong"
        else gaps.weak_polignac_census(args.limit, args.max_even)
    )
    return [{"even": e, "count": c} for e, c in census.items()], None


def _run_density(args):
    res = gaps.polignac_density_lower(args.k)
    out = {"k": res.k, "value": res.value, "asymptote": res.asymptote}
    if args.exact:
        frac = res.exact
        out["exact_numerator"] = str(frac.numerator)
        out["exact_denominator"] = str(frac.denominator)
    return None, out


def _run_constellations(args):
    tup = _tuple_from(args)
    res = constellations.count_constellations(tup, args.limit)
    return None, {
        "offsets": tuples.format_offsets(tup),
        "limit": res.limit,
        "count": res.count,
        "series_value": res.series_value,
        "prediction_simple": res.prediction_simple,
        "prediction_integral": res.prediction_integral,
        "ratio_integral": res.count / res.prediction_integral if res.prediction_integral else None,
    }


def _run_dhl(args):
    tup = _tuple_from(args)
    found = constellations.dhl_witnesses(tup, args.N, args.c1)
    return [
        {
            "n": w.n,
            "prime_positions": ",".join(map(str, w.prime_positions)),
            "consecutive_pair": None
            if w.consecutive_pair is None
            else f"{w.consecutive_pair[0]},{w.consecutive_pair[1]}",
            "almost_prime": w.almost_prime,
        }
        for w in found
    ], None


def _run_consecutive(args):
    tup = _tuple_from(args)
    count = constellations.consecutive_pair_count(tup, args.i, args.j, args.N, args.c1)
    return None, {
        "offsets": tuples.format_offsets(tup),
        "i": args.i,
        "j": args.j,
        "N": args.N,
        "c1": args.c1,
        "count": count,
    }


def _run_ap_search(args):
    found = constellations.twin_ap_search(
        args.d, args.length, args.limit, args.require_consecutive
    )
    return [
        {
            "start": ap.start,
            "step": ap.step,
            "length": ap.length,
            "elements": ",".join(map(str, ap.elements)),
        }
        for ap in found
    ], None


def _run_bv(args):
    report = constellations.bv_discrepancy(args.X, args.Q)
    rows: list[dict[str, Any]] = [
        {"kind": "q", "q": dev.q, "worst_residue": dev.worst_residue, "deviation": dev.deviation}
        for dev in report.per_q
    ]
    rows.append(
        {"kind": "total", "q": report.Q, "worst_residue": None, "deviation": report.total}
    )
    rows.append(
        {"kind": "theta-exponent", "q": None, "worst_residue": None, "deviation": report.theta_exponent}
    )
    return rows, None


_HANDLERS = {
    "sieve": _run_sieve,
    "tuple": _run_tuple,
    "series": _run_series,
    "gallagher": _run_gallagher,
    "weights": _run_weights,
    "lemma1": _run_lemma1,
    "lemma2": _run_lemma2,
    "lemma3": _run_lemma3,
    "gaps": _run_gaps,
    "histogram": _run_histogram,
    "ratios": _run_ratios,
    "polignac": _run_polignac,
    "density": _run_density,
    "constellations": _run_constellations,
    "dhl": _run_dhl,
    "consecutive": _run_consecutive,
    "ap-search": _run_ap_search,
    "bv": _run_bv,
}


# ---------------------------------------------------------------------------
# emission and manifest


def _emit(records, scalar, fmt: str) -> str:
    if scalar is not None and not isinstance(scalar, dict):
        if fmt == "json":
            return json.dumps(scalar) + "\n"
        return "value\r\n" + str(scalar) + "\r\n"
    if scalar is not None:
        if fmt == "json":
            return json.dumps(scalar) + "\n"
        records = [scalar]
    if records is None:
        records = []
    if fmt == "json":
        return "".join(json.dumps(r) + "\n" for r in records)
    buf = io.StringIO()
    if records:
        writer = csv.DictWriter(buf, fieldnames=list(records[0].keys()))
        writer.writeheader()
        for r in records:
            writer.writerow({k: ("" if v is None else v) for k, v in r.items()})
    return buf.getvalue()


def _manifest(subcommand: str, params: dict, duration: float, output: str) -> dict:
    canon = json.dumps(params, sort_keys=True)
    return {
        "subcommand": subcommand,
        "parameters": params,
        "version": __version__,
        "duration_s": duration,
        "input_sha256": hashlib.sha256(canon.encode()).hexdigest(),
        "output_sha256": hashlib.sha256(output.encode()).hexdigest(),
    }


def dispatch(argv: Sequence[str], stdout=None, stderr=None) -> int:
    """Run one subcommand; returns the exit status."""
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return int(exc.code or 0)

    params = {
        k: v for k, v in sorted(vars(args).items()) if k not in {"manifest", "threads"}
    }
    started = time.perf_counter()
    try:
        if args.threads is not None:
            _cap_threads(args.threads)
        records, scalar = _HANDLERS[args.subcommand](args)
    except (ValueError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    except engine.ResourceLimitError as exc:
        print(f"resource error: {exc}", file=stderr)
        return 3
    output = _emit(records, scalar, args.format)
    duration = time.perf_counter() - started
    stdout.write(output)

    manifest = _manifest(args.subcommand, params, duration, output)
    if args.manifest:
        with open(args.manifest, "w", encoding="utf-8") as fh:
            json.dump(manifest, fh)
            fh.write("\n")
    else:
        print(json.dumps(manifest), file=stderr)
    return 0


def _cap_threads(n: int) -> None:
    if n < 1:
        raise ValueError("--threads must be >= 1")
    try:
        import numba

        numba.set_num_threads(max(1, min(n, numba.config.NUMBA_NUM_THREADS)))
    except ImportError:
        pass


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
