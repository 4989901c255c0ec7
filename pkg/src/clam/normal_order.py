"""Range scans of log(n/lambda_k(n)) and mixed phi/lambda iterate patterns."""
from __future__ import annotations

import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .arith import Tables
from .hk import HkParams, PrimeProfiles, default_psi
from .moments import _chunks

CSV_HEADER = "n,phi_k,lambda_k,log_ratio,hk,s3,normalized"
COLUMNS = ("n", "phi_k", "lambda_k", "log_ratio", "hk", "s3", "normalized")


@dataclass(frozen=True)
class ScanRecord:
    n: int
    phi_k: int
    lambda_k: int
    log_ratio: float
    hk: float
    s3: float
    normalized: float


@dataclass(frozen=True)
class ScanSummary:
    count: int
    mean_log_ratio: float
    median_log_ratio: float
    min_log_ratio: float
    max_log_ratio: float
    mean_normalized: float
    median_normalized: float
    min_normalized: float
    max_normalized: float
    exceptional_count: int
    psi_used: float

    def to_dict(self) -> dict:
        return {k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in asdict(self).items()}


class ScanRecords:
    """Column store of scan records; iterating yields ``ScanRecord`` rows."""

    def __init__(self, columns: dict[str, np.ndarray]):
        self.columns = columns

    def __len__(self) -> int:
        return len(self.columns["n"])

    def __getitem__(self, i: int) -> ScanRecord:
        c = self.columns
        return ScanRecord(int(c["n"][i]), int(c["phi_k"][i]), int(c["lambda_k"][i]),
                          float(c["log_ratio"][i]), float(c["hk"][i]), float(c["s3"][i]),
                          float(c["normalized"][i]))

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def write_csv(self, fh) -> None:
        fh.write(CSV_HEADER + "\n")
        c = self.columns
        rows = zip(c["n"].tolist(), c["phi_k"].tolist(), c["lambda_k"].tolist(), c["log_ratio"].tolist(),
                   c["hk"].tolist(), c["s3"].tolist(), c["normalized"].tolist())
        fh.writelines(f"{n},{a},{b},{r:.12g},{h:.12g},{s:.12g},{z:.12g}\n" for n, a, b, r, h, s, z in rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def _lower_median(a: np.ndarray) -> float:
    if len(a) == 0:
        return float("nan")
    return float(np.partition(a, (len(a) - 1) // 2)[(len(a) - 1) // 2])


def summarize(records: ScanRecords, params: HkParams, psi: float) -> ScanSummary:
    c = records.columns
    lr, z = c["log_ratio"], c["normalized"]
    count = len(records)
    pred = params.predicted()
    window = params.y**params.k * psi / math.factorial(params.k - 1) if params.y > 0 else 0.0
    exceptional = int(np.count_nonzero(np.abs(lr - pred) > window))

    def stats(a):
        if count == 0:
            return (float("nan"),) * 4
        return math.fsum(a) / count, _lower_median(a), float(a.min()), float(a.max())

    return ScanSummary(count, *stats(lr), *stats(z), exceptional, float(psi))


def scan(lo: int, hi: int, k: int, params: HkParams, tables: Tables, psi: float | None = None,
         workers: int = 1) -> tuple[ScanRecords, ScanSummary]:
    """Per-n statistics for every n in [lo, hi].

    ``normalized`` divides log(n/lambda_k) by y^k log y / (k-1)! with the
    scan-wide y = loglog x; it is NaN when that prediction is not positive.
    """
    if lo > hi:
        raise ValueError(f"lo={lo} exceeds hi={hi}")
    if lo < 2 or hi > tables.limit:
        raise ValueError(f"scan range must lie in [2, {tables.limit}]")
    if k != params.k:
        raise ValueError("k disagrees with params.k")
    if workers < 1:
        raise ValueError("workers must be at least 1")
    psi = default_psi(params.y) if psi is None else float(psi)
    if not psi > 0:
        raise ValueError("psi must be positive")
    profiles = PrimeProfiles.build(params, tables, upto=hi)

    def work(span):
        a, b = span
        return profiles.decompose(a, b, tables)

    spans = _chunks(lo, hi, workers)
    if workers == 1:
        parts = [work(s) for s in spans]
    else:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(work, spans))
    cols = {name: np.concatenate([p[name] for p in parts]) for name in ("phi_k", "lambda_k", "log_ratio", "hk", "s3")}
    cols["n"] = np.arange(lo, hi + 1, dtype=np.int64)
    pred = params.predicted()
    cols["normalized"] = cols["log_ratio"] / pred if pred > 0 else np.full(hi - lo + 1, np.nan)
    records = ScanRecords({name: cols[name] for name in COLUMNS})
    return records, summarize(records, params, psi)


def summary_json(summary: ScanSummary) -> str:
    return json.dumps(summary.to_dict(), sort_keys=False)


@dataclass(frozen=True)
class IteratePattern:
    """A word over {P, L}; the leftmost symbol is applied last.

    ``l`` counts the leading P symbols. ``k_eff`` (length minus ``l``) is the
    predicted exponent of loglog n; it is None for words with no L.
    """

    source: str
    l: int
    k_eff: int | None

    @property
    def has_prediction(self) -> bool:
        return self.k_eff is not None

    @property
    def predicted_exponent(self) -> int | None:
        return self.k_eff

    @property
    def predicted_factorial(self) -> int | None:
        return None if self.k_eff is None else math.factorial(self.k_eff - 1)


class PatternError(ValueError):
    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} at offset {offset}")


def parse_pattern(s: str) -> IteratePattern:
    if not s:
        raise PatternError("empty pattern", 0)
    for i, ch in enumerate(s):
        if ch not in "PL":
            raise PatternError(f"illegal symbol {ch!r}", i)
    l = len(s) - len(s.lstrip("P"))
    return IteratePattern(s, l, len(s) - l if "L" in s else None)


def eval_pattern(n: int, pat: IteratePattern | str, tables: Tables) -> int:
    """Apply the pattern to n, innermost (rightmost) symbol first."""
    if isinstance(pat, str):
        pat = parse_pattern(pat)
    tables.check(n)
    phi, lam = tables.phi.values, tables.lam.values
    v = int(n)
    for ch in reversed(pat.source):
        v = int(phi[v]) if ch == "P" else int(lam[v])
    return v


def eval_pattern_many(ns: np.ndarray, pat: IteratePattern | str, tables: Tables) -> np.ndarray:
    if isinstance(pat, str):
        pat = parse_pattern(pat)
    ns = np.asarray(ns, dtype=np.int64)
    if ns.size and (ns.min() < 1 or ns.max() > tables.limit):
        raise ValueError("n outside table range")
    v = ns
    for ch in reversed(pat.source):
        v = (tables.phi.values if ch == "P" else tables.lam.values)[v].astype(np.int64)
    return v


def product_bound_check(a: int, b: int, tables: Tables) -> tuple[int, int]:
    """(lambda(ab), b * lambda(a)); the first never exceeds the second."""
    if a < 1 or b < 1:
        raise ValueError("a and b must be positive")
    if a * b > tables.limit:
        raise ValueError(f"a*b={a * b} exceeds table limit {tables.limit}")
    lam = tables.lam.values
    return int(lam[a * b]), b * int(lam[a])
