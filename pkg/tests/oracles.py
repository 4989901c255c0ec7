"""Independent reference implementations used to freeze expected values.

Nothing here imports the package under test. Factorization is plain trial
division and h_k is evaluated by literally nesting the divisor loops.

Run ``python tests/oracles.py`` to regenerate ``tests/data/golden.json``.
"""
import json
import math
import sys
from functools import lru_cache
from pathlib import Path

import numpy as np

GOLDEN = Path(__file__).parent / "data" / "golden.json"


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def eratosthenes(n):
    mark = np.ones(n + 1, dtype=bool)
    mark[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if mark[p]:
            mark[p * p :: p] = False
    return np.nonzero(mark)[0]


_SMALL = [int(p) for p in eratosthenes(4000)]


@lru_cache(maxsize=None)
def prime_divisors(m):
    """Distinct primes dividing m (m < 4000**2), by trial division."""
    out = []
    for p in _SMALL:
        if p * p > m:
            break
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
    if m > 1:
        out.append(m)
    return tuple(out)


def vq(q, m):
    e = 0
    while m % q == 0:
        m //= q
        e += 1
    return e


def small_primes(x, k):
    y = math.log(math.log(x))
    bound = y**k if y > 0 else 0.0
    return [q for q in range(2, int(bound) + 1) if is_prime(q)]


def hk_nested(n, x, k):
    """h_k(n) with one explicit loop per chain level (k <= 3)."""
    qs = small_primes(x, k)

    def tail(pk):
        return sum(vq(q, pk - 1) * math.log(q) for q in qs)

    total = 0.0
    for p1 in prime_divisors(n) if n > 1 else ():
        if k == 1:
            total += tail(p1)
            continue
        for p2 in prime_divisors(p1 - 1) if p1 > 2 else ():
            if k == 2:
                total += tail(p2)
                continue
            for p3 in prime_divisors(p2 - 1) if p2 > 2 else ():
                total += tail(p3)
    return total


def hk_prime_values(primes, x, k):
    """h_k(p) for each prime, by recursion over the chain levels."""
    qs = small_primes(x, k)
    logs = {q: math.log(q) for q in qs}

    @lru_cache(maxsize=None)
    def g(p, level):
        if p <= 2:
            return 0.0
        if level == 1:
            return sum(vq(q, p - 1) * logs[q] for q in qs)
        return sum(g(r, level - 1) for r in prime_divisors(p - 1))

    return np.array([g(int(p), k) for p in primes])


def moments(x, k):
    primes = eratosthenes(int(x))
    h = hk_prime_values(primes, x, k)
    m1 = math.fsum(h / primes)
    m2 = math.fsum(h * h / primes)
    # additive extension by walking multiples of each prime
    full = np.zeros(int(x) + 1)
    for p, hp in zip(primes, h):
        if hp:
            full[p::p] += hp
    lhs = math.fsum((full[1:] - m1) ** 2)
    return {"m1": m1, "m2": m2, "tk_lhs": lhs, "tk_ratio": lhs / (x * m2) if m2 else 0.0}


def carmichael_by_orders(n):
    """lcm of the multiplicative orders of all units mod n."""
    if n <= 2:
        return 1
    out = 1
    for a in range(1, n):
        if math.gcd(a, n) != 1:
            continue
        o, v = 1, a % n
        while v != 1:
            v = v * a % n
            o += 1
        out = math.lcm(out, o)
    return out


def main():
    golden = {"moments": {}}
    for x in (10**5, 10**6):
        for k in (1, 2):
            golden["moments"][f"{x}:{k}"] = moments(x, k)
            print(x, k, golden["moments"][f"{x}:{k}"], file=sys.stderr)
    GOLDEN.parent.mkdir(exist_ok=True)
    GOLDEN.write_text(json.dumps(golden, indent=2) + "\n")


if __name__ == "__main__":
    main()
