"""Smallest-prime-factor sieve, factorization and prime-progression sums."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels

MAX_LIMIT = 2**32 - 1
DEFAULT_LIMIT = 10**7

Factorization = list[tuple[int, int]]


@dataclass(frozen=True, eq=False)
class SpfTable:
    """Least prime factor of every integer in ``[0, limit]``.

    ``spf[0] == spf[1] == 0``; for ``n >= 2``, ``spf[n]`` is the least prime
    dividing ``n``. The table is read-only once built.
    """

    limit: int
    spf: np.ndarray
    primes: np.ndarray = field(repr=False)

    @classmethod
    def from_array(cls, spf: np.ndarray) -> SpfTable:
        spf = np.ascontiguousarray(spf, dtype=np.uint32)
        limit = len(spf) - 1
        idx = np.arange(2, limit + 1, dtype=np.uint32)
        primes = idx[spf[2:] == idx]
        spf.flags.writeable = False
        primes.flags.writeable = False
        return cls(limit, spf, primes)

    def is_prime(self, n: int) -> bool:
        self._check(n)
        return n >= 2 and int(self.spf[n]) == n

    def primes_upto(self, t: int) -> np.ndarray:
        self._check(t)
        return self.primes[: np.searchsorted(self.primes, t, side="right")]

    def _check(self, n: int) -> None:
        if not 0 <= n <= self.limit:
            raise ValueError(f"{n} outside sieve range [0, {self.limit}]")


def build_spf(limit: int) -> SpfTable:
    if not isinstance(limit, (int, np.integer)) or isinstance(limit, bool):
        raise TypeError("limit must be an integer")
    if limit < 2 or limit > MAX_LIMIT:
        raise ValueError(f"limit must lie in [2, {MAX_LIMIT}], got {limit}")
    spf, primes = _kernels.linear_sieve(int(limit))
    spf.flags.writeable = False
    primes.flags.writeable = False
    return SpfTable(int(limit), spf, primes)


def factorize(n: int, table: SpfTable) -> Factorization:
    """Prime factorization of ``n`` as ascending ``(prime, exponent)`` pairs.

    >>> factorize(360, build_spf(400))
    [(2, 3), (3, 2), (5, 1)]
    """
    if n < 1 or n > table.limit:
        raise ValueError(f"cannot factor {n} with a table of limit {table.limit}")
    spf = table.spf
    out = []
    n = int(n)
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return out


def _progression(t: int, m: int, table: SpfTable) -> np.ndarray:
    if m < 1:
        raise ValueError("modulus must be positive")
    if t > table.limit:
        raise ValueError(f"t={t} exceeds sieve limit {table.limit}")
    ps = table.primes_upto(max(t, 0)).astype(np.int64)
    return ps[ps % m == 1] if m > 1 else ps


def count_progression_primes(t: int, m: int, table: SpfTable) -> int:
    """Number of primes p <= t with p = 1 (mod m)."""
    return int(len(_progression(t, m, table)))


def progression_recip_sum(t: int, m: int, table: SpfTable, shifted: bool = False) -> float:
    """Sum of 1/p, or 1/(p-1) when ``shifted``, over primes p <= t, p = 1 (mod m)."""
    ps = _progression(t, m, table)
    denom = ps - 1 if shifted else ps
    return math.fsum(1.0 / denom)


def progression_diagnostic(t: int, m: int, table: SpfTable) -> dict:
    """Compare both reciprocal sums against loglog(t)/phi(m).

    ``fitted_c`` is the constant that would make the unshifted sum equal
    c * loglog(t) / m, for reading off an empirical Brun-Titchmarsh constant.
    """
    from .arith import euler_phi

    unshifted = progression_recip_sum(t, m, table)
    shifted = progression_recip_sum(t, m, table, shifted=True)
    phi_m = euler_phi(factorize(m, table)) if m <= table.limit else None
    if phi_m is None:
        raise ValueError(f"m={m} exceeds sieve limit {table.limit}")
    main = math.log(math.log(t)) / phi_m if t > math.e else float("nan")
    return {
        "t": t,
        "m": m,
        "count": count_progression_primes(t, m, table),
        "recip_sum": unshifted,
        "shifted_recip_sum": shifted,
        "gap": shifted - unshifted,
        "gap_bound": 2.0 / m**2,
        "main_term": main,
        "deviation": unshifted - main,
        "shifted_deviation": shifted - main,
        "fitted_c": unshifted * m / math.log(math.log(t)) if t > math.e else float("nan"),
    }


def mertens_sum(t: int, table: SpfTable) -> float:
    """Sum of log(q)/q over primes q <= t."""
    if t > table.limit:
        raise ValueError(f"t={t} exceeds sieve limit {table.limit}")
    if t < 2:
        return 0.0
    ps = table.primes_upto(t).astype(np.float64)
    return math.fsum(np.log(ps) / ps)
