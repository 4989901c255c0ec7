"""The additive approximant h_k and the four-way split of log(phi_k/lambda_k).

For a prime p define the chain profile

    G_1(p) = sum_{q <= y^k} v_q(p - 1) log q
    G_j(p) = sum_{r | p - 1} G_{j-1}(r)          (distinct primes r)

and h_k(n) = sum_{p | n} G_k(p). Internally G is carried as an integer
exponent vector over the small primes q <= y^k and weighted by log q only at
the end, always in ascending q. Keeping the integer form makes the
comparison between h_k(n) and the small-prime part of phi_k(n) exact.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _kernels
from .arith import Tables, is_prime
from .sieve import SpfTable, factorize

# x must exceed e^(e^e) for the asymptotic statements to apply
STANDING_X = math.exp(math.exp(math.e))


class SmallXWarning(UserWarning):
    pass


@dataclass(frozen=True)
class HkParams:
    """Scan ceiling ``x`` and depth ``k``; fixes which primes count as small.

    ``y = loglog x``; small primes are those q <= ``threshold`` = y^k. When
    y <= 0 the threshold is 0 and no prime is small.
    """

    x: float
    k: int
    y: float = field(init=False)
    threshold: float = field(init=False)
    warning: bool = field(init=False)

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if not self.x >= 2:
            raise ValueError(f"x must be at least 2, got {self.x}")
        y = math.log(math.log(self.x))
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "threshold", y**self.k if y > 0 else 0.0)
        object.__setattr__(self, "warning", self.x <= STANDING_X)

    @cached_property
    def small_primes(self) -> list[int]:
        return [q for q in range(2, math.floor(self.threshold) + 1) if is_prime(q)]

    @cached_property
    def log_small(self) -> list[float]:
        return [math.log(q) for q in self.small_primes]

    def predicted(self) -> float:
        """y^k log y / (k-1)!, the normal-order prediction (may be <= 0 for tiny x)."""
        return self.y**self.k * math.log(self.y) / math.factorial(self.k - 1) if self.y > 0 else 0.0

    def warn_if_small(self) -> None:
        if self.warning:
            warnings.warn(
                f"x={self.x:g} does not exceed e^(e^e) ~ {STANDING_X:.6g}; "
                "asymptotic comparisons are outside their stated range",
                SmallXWarning,
                stacklevel=3,
            )


def default_psi(y: float) -> float:
    """log(y)/loglog(y), floored at 1 (and 1 wherever that is undefined)."""
    if y <= math.e:
        return 1.0
    return max(1.0, math.log(y) / math.log(math.log(y)))


@dataclass(frozen=True)
class ComponentBreakdown:
    s1: float
    s2: float
    s3: float
    s4: float
    hk: float
    log_ratio: float

    def residual(self) -> float:
        return self.s1 + self.s2 + self.s3 - self.s4 - self.log_ratio


def _spf(obj) -> SpfTable:
    return obj.spf if isinstance(obj, Tables) else obj


def _weigh(counts, logs) -> float:
    s = 0.0
    for c, lg in zip(counts, logs):
        s += c * lg
    return s


def _profile(p: int, level: int, params: HkParams, spf: SpfTable) -> list[int]:
    qs = params.small_primes
    out = [0] * len(qs)
    if level == 1:
        if p > 2:
            v = dict(factorize(p - 1, spf))
            out = [v.get(q, 0) for q in qs]
        return out
    if p > 2:
        for r, _ in factorize(p - 1, spf):
            sub = _profile(r, level - 1, params, spf)
            out = [a + b for a, b in zip(out, sub)]
    return out


def hk_counts(n: int, params: HkParams, tables) -> list[int]:
    """Integer exponent of each small prime in h_k(n)."""
    spf = _spf(tables)
    out = [0] * len(params.small_primes)
    for p, _ in factorize(n, spf):
        out = [a + b for a, b in zip(out, _profile(p, params.k, params, spf))]
    return out


def hk(n: int, params: HkParams, tables) -> float:
    return _weigh(hk_counts(n, params, tables), params.log_small)


def hk_prime(p: int, params: HkParams, spf) -> float:
    """h_k at a prime, summing chains that start at p_2 | p - 1."""
    spf = _spf(spf)
    if not spf.is_prime(p):
        raise ValueError(f"{p} is not prime")
    if params.k == 1:
        return _weigh(_profile(p, 1, params, spf), params.log_small)
    counts = [0] * len(params.small_primes)
    for r, _ in factorize(p - 1, spf) if p > 2 else []:
        counts = [a + b for a, b in zip(counts, _profile(r, params.k - 1, params, spf))]
    return _weigh(counts, params.log_small)


def _phi_k(n: int, k: int, tables: Tables) -> tuple[int, int]:
    tables.check(n)
    a = b = int(n)
    for _ in range(k):
        a = int(tables.phi.values[a])
        b = int(tables.lam.values[b])
    return a, b


def small_valuation_sum(n: int, params: HkParams, tables: Tables) -> float:
    """Sum over small primes q of v_q(phi_k(n)) log q."""
    a, _ = _phi_k(n, params.k, tables)
    v = dict(factorize(a, tables.spf))
    return _weigh([v.get(q, 0) for q in params.small_primes], params.log_small)


def decompose(n: int, params: HkParams, tables: Tables) -> ComponentBreakdown:
    a, b = _phi_k(n, params.k, tables)
    vl = dict(factorize(b, tables.spf))
    vp = dict(factorize(a, tables.spf))
    s1 = s2 = 0.0
    for q, e in vp.items():
        if q <= params.threshold:
            continue
        term = (e - vl.get(q, 0)) * math.log(q)
        if e == 1:
            s1 += term
        else:
            s2 += term
    qs = params.small_primes
    s3 = _weigh([vp.get(q, 0) for q in qs], params.log_small)
    s4 = _weigh([vl.get(q, 0) for q in qs], params.log_small)
    return ComponentBreakdown(s1, s2, s3, s4, hk(n, params, tables), math.log(a // b))


@dataclass(frozen=True, eq=False)
class PrimeProfiles:
    """Chain profiles G_k for every prime up to ``upto``, as integer rows."""

    params: HkParams
    upto: int
    primes: np.ndarray
    counts: np.ndarray
    qidx: np.ndarray
    logq: np.ndarray

    @classmethod
    def build(cls, params: HkParams, tables, upto: int | None = None) -> PrimeProfiles:
        spf = _spf(tables)
        upto = spf.limit if upto is None else int(upto)
        if upto > spf.limit:
            raise ValueError(f"{upto} exceeds sieve limit {spf.limit}")
        primes = spf.primes_upto(upto)
        qs = params.small_primes
        qidx = np.full(max(2, math.floor(params.threshold) + 1), -1, np.int64)
        for j, q in enumerate(qs):
            qidx[q] = j
        counts = _kernels.chain_counts(spf.spf, primes, len(primes), qidx, len(qs), params.k)
        logq = np.array(params.log_small, dtype=np.float64)
        return cls(params, upto, primes, counts, qidx, logq)

    def prime_values(self) -> np.ndarray:
        """h_k(p) for each prime in ``self.primes``."""
        return _kernels.weighted(self.counts, self.logq)

    def hk_counts(self, lo: int, hi: int, spf: SpfTable) -> np.ndarray:
        self._range(lo, hi)
        return _kernels.additive_counts(lo, hi, spf.spf, self.primes, self.counts)

    def hk_values(self, lo: int, hi: int, spf) -> np.ndarray:
        return _kernels.weighted(self.hk_counts(lo, hi, _spf(spf)), self.logq)

    def decompose(self, lo: int, hi: int, tables: Tables) -> dict[str, np.ndarray]:
        """Columnar ``decompose`` over ``[lo, hi]``.

        Keys: phi_k, lambda_k, s1, s2, s3, s4, hk, gap (s3 - hk from integer
        differences), log_ratio (log(n/lambda_k)) and split_ratio
        (log(phi_k/lambda_k)).
        """
        self._range(lo, hi)
        out = _kernels.decompose_range(
            lo, hi, self.params.k, self.params.threshold, tables.spf.spf, tables.phi.values,
            tables.lam.values, self.primes, self.counts, self.qidx, self.logq,
        )
        names = ("phi_k", "lambda_k", "s1", "s2", "s3", "s4", "hk", "gap", "log_ratio")
        cols = dict(zip(names, out))
        cols["split_ratio"] = np.log((cols["phi_k"] // cols["lambda_k"]).astype(np.float64))
        return cols

    def min_margin(self, lo: int, hi: int, tables: Tables) -> tuple[int, int]:
        """Least v_q(phi_k(n)) - (h_k exponent of q) over n in range and small q."""
        self._range(lo, hi)
        if len(self.params.small_primes) == 0:
            return 0, lo
        m, n = _kernels.min_small_margin(
            lo, hi, self.params.k, tables.spf.spf, tables.phi.values, self.primes, self.counts, self.qidx
        )
        return int(m), int(n)

    def _range(self, lo: int, hi: int) -> None:
        if not 1 <= lo <= hi <= self.upto:
            raise ValueError(f"range [{lo}, {hi}] not inside [1, {self.upto}]")
