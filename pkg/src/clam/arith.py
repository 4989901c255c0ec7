"""Euler phi, Carmichael lambda, their tables and iterate chains."""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels, cache
from .sieve import Factorization, SpfTable, build_spf, factorize

ORACLE_LIMIT = 10**5


def euler_phi(f: Factorization) -> int:
    out = 1
    for p, e in f:
        out *= p ** (e - 1) * (p - 1)
    return out


def _lambda_prime_power(p: int, e: int) -> int:
    if p == 2:
        return 1 if e == 1 else 2 if e == 2 else 2 ** (e - 2)
    return p ** (e - 1) * (p - 1)


def carmichael(f: Factorization) -> int:
    """Carmichael lambda from a factorization: lcm of lambda(p^e) over the parts."""
    out = 1
    for p, e in f:
        out = math.lcm(out, _lambda_prime_power(p, e))
    return out


def _powmod(base: np.ndarray, exp: int, n: int) -> np.ndarray:
    # products stay below n**2 <= 1e10, well inside int64
    result = np.ones_like(base)
    b = base % n
    while exp:
        if exp & 1:
            result = result * b % n
        b = b * b % n
        exp >>= 1
    return result


def group_exponent_oracle(n: int) -> int:
    """Exponent of (Z/nZ)^x by direct search, independent of the lambda formula.

    Starts from the group order (a count of residues coprime to n) and
    repeatedly divides out a prime r while a^(m/r) = 1 still holds for
    every unit a. The result is the least m killing every unit.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n > ORACLE_LIMIT:
        raise ValueError(f"oracle is capped at n <= {ORACLE_LIMIT}")
    if n <= 2:
        return 1
    a = np.arange(1, n, dtype=np.int64)
    units = a[np.gcd(a, n) == 1]
    m = len(units)
    r = 2
    rest = m
    primes = []
    while r * r <= rest:
        if rest % r == 0:
            primes.append(r)
            while rest % r == 0:
                rest //= r
        r += 1
    if rest > 1:
        primes.append(rest)
    for r in primes:
        while m % r == 0 and np.all(_powmod(units, m // r, n) == 1):
            m //= r
    return m


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    return all(q % d for d in range(2, math.isqrt(q) + 1))


def valuation(q: int, n: int) -> int:
    if not is_prime(q):
        raise ValueError(f"{q} is not prime")
    if n < 1:
        raise ValueError("n must be positive")
    e = 0
    while n % q == 0:
        n //= q
        e += 1
    return e


@dataclass(frozen=True, eq=False)
class _ValueTable:
    limit: int
    values: np.ndarray

    def __getitem__(self, n):
        return self.values[n]


class PhiTable(_ValueTable):
    kind = "phi"


class LambdaTable(_ValueTable):
    kind = "lambda"


def build_tables(limit: int, spf: SpfTable) -> tuple[PhiTable, LambdaTable]:
    if limit > spf.limit:
        raise ValueError(f"limit {limit} exceeds sieve limit {spf.limit}")
    if limit < 1:
        raise ValueError("limit must be positive")
    phi, lam = _kernels.phi_lambda_tables(spf.spf[: limit + 1], int(limit))
    phi.flags.writeable = False
    lam.flags.writeable = False
    return PhiTable(int(limit), phi), LambdaTable(int(limit), lam)


@dataclass(frozen=True, eq=False)
class Tables:
    """The spf, phi and lambda tables over one common range."""

    spf: SpfTable
    phi: PhiTable
    lam: LambdaTable

    @property
    def limit(self) -> int:
        return self.spf.limit

    @classmethod
    def build(cls, limit: int) -> Tables:
        spf = build_spf(limit)
        return cls(spf, *build_tables(limit, spf))

    def save(self, directory) -> list[Path]:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        return [
            cache.write_table(cache.table_path(directory, kind, self.limit), kind, arr)
            for kind, arr in (("spf", self.spf.spf), ("phi", self.phi.values), ("lambda", self.lam.values))
        ]

    @classmethod
    def load(cls, directory, limit: int) -> Tables:
        arrays = {}
        for kind in cache.KINDS:
            _, arr = cache.read_table(cache.table_path(directory, kind, limit), kind)
            if len(arr) != limit + 1:
                raise cache.CacheError("length", cache.table_path(directory, kind, limit))
            arr.flags.writeable = False
            arrays[kind] = arr
        return cls(
            SpfTable.from_array(arrays["spf"]),
            PhiTable(limit, arrays["phi"]),
            LambdaTable(limit, arrays["lambda"]),
        )

    def check(self, n: int) -> None:
        if not 1 <= n <= self.limit:
            raise ValueError(f"n={n} outside table range [1, {self.limit}]")


@dataclass(frozen=True)
class IterateChain:
    n: int
    k: int
    phi_chain: list[int]
    lambda_chain: list[int]

    @property
    def phi_k(self) -> int:
        return self.phi_chain[-1]

    @property
    def lambda_k(self) -> int:
        return self.lambda_chain[-1]

    def log_ratio(self) -> float:
        """log(n / lambda_k(n))."""
        return math.log(self.n / self.lambda_k)

    def telescoping_terms(self) -> list[float]:
        """log(phi_{i-1}/phi_i) for i = 1..k, then log(phi_k/lambda_k)."""
        c = self.phi_chain
        terms = [math.log(c[i] / c[i + 1]) for i in range(self.k)]
        terms.append(math.log(self.phi_k // self.lambda_k))
        return terms


def iterate_chain(n: int, k: int, tables: Tables) -> IterateChain:
    tables.check(n)
    if k < 1:
        raise ValueError("k must be at least 1")
    phi, lam = tables.phi.values, tables.lam.values
    pc = [int(n)]
    lc = []
    a = b = int(n)
    for _ in range(k):
        a = int(phi[a])
        b = int(lam[b])
        pc.append(a)
        lc.append(b)
    return IterateChain(int(n), int(k), pc, lc)


def phi_valuation_identity(m: int, q: int, spf: SpfTable) -> tuple[int, int]:
    """Both sides of v_q(phi(m)) = max(0, v_q(m) - 1) + sum_{p | m} v_q(p - 1)."""
    f = factorize(m, spf)
    lhs = valuation(q, euler_phi(f))
    vm = dict(f).get(q, 0)
    rhs = max(0, vm - 1) + sum(valuation(q, p - 1) for p, _ in f)
    return lhs, rhs
