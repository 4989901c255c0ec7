"""Command-line front end.

Exit status: 0 on success, 1 on argument errors, 2 on I/O or cache errors.
Payloads (CSV/JSON) go to stdout or --out; warnings go to stderr.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from decimal import Decimal, InvalidOperation

import numpy as np

from . import cache
from .arith import Tables, iterate_chain
from .hk import HkParams, PrimeProfiles, decompose, default_psi, hk, small_valuation_sum
from .moments import tk_check
from .normal_order import eval_pattern, parse_pattern, PatternError, scan
from .sieve import DEFAULT_LIMIT, MAX_LIMIT, mertens_sum, progression_diagnostic


class ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ArgumentError(message)


def _int(text: str) -> int:
    try:
        d = Decimal(text)
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not d.is_finite() or d != d.to_integral_value():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(d)


def _real(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="clam", description="Iterated Carmichael lambda and Euler phi at bulk scale.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sieve", help="build and cache the spf/phi/lambda tables")
    s.add_argument("--limit", type=_int, default=DEFAULT_LIMIT)
    s.add_argument("--out", help="cache directory (default: $CLAM_CACHE_DIR or the user cache dir)")

    s = sub.add_parser("compute", help="iterate chains and h_k data for one n")
    s.add_argument("--n", type=_int, required=True)
    s.add_argument("--k", type=_int, required=True)
    s.add_argument("--x", type=_real)

    s = sub.add_parser("scan", help="per-n records over a range")
    s.add_argument("--lo", type=_int, required=True)
    s.add_argument("--hi", type=_int, required=True)
    s.add_argument("--k", type=_int, required=True)
    s.add_argument("--x", type=_real)
    s.add_argument("--psi", type=_real)
    s.add_argument("--threads", type=_int, default=1)
    s.add_argument("--out", help="CSV destination (default stdout)")
    s.add_argument("--json", action="store_true", help="emit the summary as JSON")

    s = sub.add_parser("moments", help="M1, M2 and the Turan-Kubilius ratio")
    s.add_argument("--x", type=_real, required=True)
    s.add_argument("--k", type=_int, required=True)
    s.add_argument("--threads", type=_int, default=1)
    s.add_argument("--json", action="store_true")

    s = sub.add_parser("audit", help="aggregate the four-way decomposition")
    s.add_argument("--x", type=_real, required=True)
    s.add_argument("--k", type=_int, required=True)
    s.add_argument("--sample", type=_int)
    s.add_argument("--seed", type=_int, default=0)
    s.add_argument("--psi", type=_real)

    s = sub.add_parser("pattern", help="evaluate a P/L iterate word at n")
    s.add_argument("--pattern", required=True)
    s.add_argument("--n", type=_int, required=True)

    s = sub.add_parser("diagnostics", help="Mertens and prime-progression sums")
    s.add_argument("--t", type=_int, required=True)
    s.add_argument("--m", type=_int)
    return p


def _need(cond: bool, message: str) -> None:
    if not cond:
        raise ArgumentError(message)


def _validate(a) -> int:
    """Check every flag; return the table limit the command needs."""
    if a.command == "sieve":
        _need(2 <= a.limit <= MAX_LIMIT, f"--limit must lie in [2, {MAX_LIMIT}]")
        return a.limit
    if a.command == "compute":
        _need(a.n >= 1, "--n must be positive")
        _need(a.k >= 1, "--k must be positive")
        _need(a.x is None or a.x >= 2, "--x must be at least 2")
        return max(a.n, 2)
    if a.command == "scan":
        _need(a.lo >= 2, "--lo must be at least 2")
        _need(a.lo <= a.hi, "--lo must not exceed --hi")
        _need(a.k >= 1, "--k must be positive")
        _need(a.threads >= 1, "--threads must be at least 1")
        _need(a.psi is None or a.psi > 0, "--psi must be positive")
        if a.x is None:
            a.x = float(a.hi)
        _need(a.x >= 2, "--x must be at least 2")
        return a.hi
    if a.command == "moments":
        _need(a.k >= 1, "--k must be positive")
        _need(a.x >= 2, "--x must be at least 2")
        _need(a.threads >= 1, "--threads must be at least 1")
        _need(math.floor(a.x) <= MAX_LIMIT, "--x exceeds the table cap")
        return math.floor(a.x)
    if a.command == "audit":
        _need(a.k >= 1, "--k must be positive")
        _need(a.x >= 2, "--x must be at least 2")
        _need(a.sample is None or a.sample >= 1, "--sample must be positive")
        _need(a.psi is None or a.psi > 0, "--psi must be positive")
        _need(math.floor(a.x) <= MAX_LIMIT, "--x exceeds the table cap")
        return math.floor(a.x)
    if a.command == "pattern":
        try:
            a.parsed = parse_pattern(a.pattern)
        except PatternError as e:
            raise ArgumentError(str(e))
        _need(a.n >= 1, "--n must be positive")
        return max(a.n, 2)
    if a.command == "diagnostics":
        _need(a.t >= 2, "--t must be at least 2")
        _need(a.m is None or a.m >= 1, "--m must be positive")
        return max(a.t, a.m or 0)
    raise ArgumentError(f"unknown command {a.command}")


def _tables(limit: int) -> Tables:
    directory = cache.default_cache_dir()
    found = cache.find_cached(directory, limit)
    if found is not None:
        return Tables.load(directory, found)
    return Tables.build(limit)


def _dump(obj) -> str:
    return json.dumps(obj, allow_nan=False)


def _finite(v):
    return None if isinstance(v, float) and not math.isfinite(v) else v


def cmd_sieve(a, out):
    tables = Tables.build(a.limit)
    paths = tables.save(a.out or cache.default_cache_dir())
    out.write(_dump({"limit": a.limit, "files": [str(p) for p in paths]}) + "\n")


def cmd_compute(a, out):
    tables = _tables(max(a.n, 2))
    chain = iterate_chain(a.n, a.k, tables)
    payload = {
        "n": a.n,
        "k": a.k,
        "phi_chain": chain.phi_chain,
        "lambda_chain": chain.lambda_chain,
        "log_ratio": chain.log_ratio(),
        "telescoping": chain.telescoping_terms(),
    }
    if a.x is not None:
        params = HkParams(a.x, a.k)
        params.warn_if_small()
        br = decompose(a.n, params, tables)
        payload.update(
            x=a.x,
            y=params.y,
            threshold=params.threshold,
            hk=hk(a.n, params, tables),
            small_valuation_sum=small_valuation_sum(a.n, params, tables),
            breakdown={"s1": br.s1, "s2": br.s2, "s3": br.s3, "s4": br.s4, "hk": br.hk, "log_ratio": br.log_ratio},
        )
    out.write(_dump(payload) + "\n")


def cmd_scan(a, out):
    tables = _tables(a.hi)
    params = HkParams(a.x, a.k)
    params.warn_if_small()
    records, summary = scan(a.lo, a.hi, a.k, params, tables, psi=a.psi, workers=a.threads)
    if a.out:
        with open(a.out, "w", newline="") as fh:
            records.write_csv(fh)
        if a.json:
            out.write(_dump(summary.to_dict()) + "\n")
        else:
            print(f"wrote {len(records)} records to {a.out}", file=sys.stderr)
    elif a.json:
        out.write(_dump(summary.to_dict()) + "\n")
    else:
        records.write_csv(out)


def cmd_moments(a, out):
    tables = _tables(max(math.floor(a.x), 2))
    HkParams(a.x, a.k).warn_if_small()
    report = tk_check(a.x, a.k, tables, workers=a.threads)
    d = report.to_dict()
    if a.json:
        out.write(_dump(d) + "\n")
    else:
        out.writelines(f"{key}: {value}\n" for key, value in d.items())


def cmd_audit(a, out):
    n_max = math.floor(a.x)
    tables = _tables(max(n_max, 2))
    params = HkParams(a.x, a.k)
    params.warn_if_small()
    psi = default_psi(params.y) if a.psi is None else a.psi
    if a.sample is None or a.sample >= n_max:
        cols = PrimeProfiles.build(params, tables, upto=n_max).decompose(1, n_max, tables)
        s1, s2, s3, s4, h = cols["s1"], cols["s2"], cols["s3"], cols["s4"], cols["hk"]
        gap = cols["gap"]
    else:
        rng = np.random.default_rng(a.seed)
        ns = np.sort(rng.choice(np.arange(1, n_max + 1), size=a.sample, replace=False))
        rows = [decompose(int(n), params, tables) for n in ns]
        s1, s2, s3, s4, h = (np.array([getattr(r, f) for r in rows]) for f in ("s1", "s2", "s3", "s4", "hk"))
        gap = s3 - h
    count = len(s1)
    big = params.y**params.k * psi
    small = params.y ** (params.k - 1) * math.log(params.y) * psi if params.y > 0 else 0.0
    pred = params.predicted()

    def agg(v, scale=None):
        d = {"sum": math.fsum(v), "mean": math.fsum(v) / count, "max": float(v.max())}
        if scale is not None:
            d["scale"] = scale
            d["exceed_fraction"] = float(np.count_nonzero(v > scale)) / count
        return d

    payload = {
        "x": a.x,
        "k": a.k,
        "y": params.y,
        "threshold": params.threshold,
        "psi": psi,
        "count": count,
        "sampled": a.sample is not None and a.sample < n_max,
        "large_simple": agg(s1, big),
        "large_repeated": agg(s2, big),
        "small_lambda": agg(s4, big),
        "small_phi_minus_hk": agg(gap, small),
        "small_phi": agg(s3),
        "hk": {
            "mean": math.fsum(h) / count,
            "predicted": pred,
            "off_by_more_than_y_k": float(np.count_nonzero(np.abs(h - pred) > params.y**params.k)) / count,
        },
    }
    out.write(_dump(payload) + "\n")


def cmd_pattern(a, out):
    tables = _tables(max(a.n, 2))
    pat = a.parsed
    out.write(_dump({
        "pattern": pat.source,
        "n": a.n,
        "value": eval_pattern(a.n, pat, tables),
        "l": pat.l,
        "k_eff": pat.k_eff,
        "predicted_factorial": pat.predicted_factorial,
    }) + "\n")


def cmd_diagnostics(a, out):
    tables = _tables(max(a.t, a.m or 0, 2))
    ms = mertens_sum(a.t, tables.spf)
    payload = {"t": a.t, "mertens_sum": ms, "log_t": math.log(a.t), "mertens_deviation": ms - math.log(a.t)}
    if a.m is not None:
        payload["progression"] = {k: _finite(v) for k, v in progression_diagnostic(a.t, a.m, tables.spf).items()}
    out.write(_dump(payload) + "\n")


COMMANDS = {
    "sieve": cmd_sieve,
    "compute": cmd_compute,
    "scan": cmd_scan,
    "moments": cmd_moments,
    "audit": cmd_audit,
    "pattern": cmd_pattern,
    "diagnostics": cmd_diagnostics,
}


def _show_warning(message, category, filename, lineno, file=None, line=None):
    print(f"warning: {message}", file=sys.stderr)


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        _validate(args)
    except ArgumentError as e:
        print(f"clam: error: {e}", file=sys.stderr)
        return 1
    with warnings.catch_warnings():
        warnings.simplefilter("always")
        warnings.showwarning = _show_warning
        try:
            COMMANDS[args.command](args, out)
        except cache.CacheError as e:
            print(f"clam: cache error: {e}", file=sys.stderr)
            return 2
        except OSError as e:
            print(f"clam: I/O error: {e}", file=sys.stderr)
            return 2
        except ValueError as e:
            print(f"clam: error: {e}", file=sys.stderr)
            return 1
    return 0


def main() -> None:
    sys.exit(run())
