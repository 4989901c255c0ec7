"""First and second prime moments of h_k and the Turan-Kubilius diagnostic."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .arith import Tables
from .hk import HkParams, PrimeProfiles

# Fixed after the first oracle run (tests/data/golden.json): the largest
# ratio over (x, k) in {1e5, 1e6} x {1, 2} was 0.447, at (1e6, 1).
C_TK = 1.0


@dataclass(frozen=True)
class MomentReport:
    x: float
    k: int
    m1_exact: float
    m2_exact: float
    m1_predicted: float
    tk_lhs: float
    tk_ratio: float

    def to_dict(self) -> dict:
        return {key: (None if isinstance(v, float) and math.isnan(v) else v) for key, v in asdict(self).items()}


def _ceiling(x: float, tables: Tables) -> int:
    n = math.floor(x)
    if n > tables.limit:
        raise ValueError(f"x={x:g} exceeds table limit {tables.limit}")
    return n


def prime_moments(x: float, k: int, tables: Tables, profiles: PrimeProfiles | None = None):
    """(primes <= x, h_k at each of them, M1, M2) with y taken from x."""
    n = _ceiling(x, tables)
    if profiles is None:
        profiles = PrimeProfiles.build(HkParams(x, k), tables, upto=max(n, 2))
    vals = profiles.prime_values()
    keep = profiles.primes <= n
    ps = profiles.primes[keep].astype(np.float64)
    vals = vals[keep]
    m1 = math.fsum(vals / ps)
    m2 = math.fsum(vals * vals / ps)
    return profiles.primes[keep], vals, m1, m2


def m1_exact(x: float, k: int, tables: Tables) -> float:
    """Sum over primes p <= x of h_k(p)/p."""
    return prime_moments(x, k, tables)[2]


def m2_exact(x: float, k: int, tables: Tables) -> float:
    """Sum over primes p <= x of h_k(p)^2/p."""
    return prime_moments(x, k, tables)[3]


def m1_predicted(x: float, k: int) -> float:
    """y^k log y / (k-1)! with y = loglog x.

    Requires loglog x >= 1, i.e. x >= e^e; the boundary itself gives 0.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if not x > 1 or math.log(x) <= 1:
        raise ValueError(f"x={x:g} must exceed e^e")
    y = math.log(math.log(x))
    if y < 1 and not math.isclose(y, 1.0, abs_tol=1e-12):
        raise ValueError(f"x={x:g} must exceed e^e (loglog x = {y:.6g} < 1)")
    return y**k * max(0.0, math.log(y)) / math.factorial(k - 1)


def _chunks(lo: int, hi: int, workers: int) -> list[tuple[int, int]]:
    size = hi - lo + 1
    parts = max(1, min(workers, size))
    step = -(-size // parts)
    return [(a, min(hi, a + step - 1)) for a in range(lo, hi + 1, step)]


def hk_range(lo: int, hi: int, profiles: PrimeProfiles, tables: Tables, workers: int = 1) -> np.ndarray:
    """h_k(n) for n in [lo, hi], computed in contiguous chunks, merged by index."""
    if workers < 1:
        raise ValueError("workers must be at least 1")
    spans = _chunks(lo, hi, workers)
    if workers == 1:
        parts = [profiles.hk_values(a, b, tables) for a, b in spans]
    else:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(lambda s: profiles.hk_values(s[0], s[1], tables), spans))
    return np.concatenate(parts)


def tk_check(x: float, k: int, tables: Tables, workers: int = 1) -> MomentReport:
    n = _ceiling(x, tables)
    params = HkParams(x, k)
    profiles = PrimeProfiles.build(params, tables, upto=max(n, 2))
    _, _, m1, m2 = prime_moments(x, k, tables, profiles)
    h = hk_range(1, n, profiles, tables, workers) if n >= 1 else np.zeros(0)
    lhs = math.fsum((h - m1) ** 2)
    ratio = lhs / (x * m2) if m2 > 0 else 0.0
    try:
        pred = m1_predicted(x, k)
    except ValueError:
        pred = float("nan")
    return MomentReport(float(x), int(k), m1, m2, pred, lhs, ratio)
