import math
import random

import numpy as np
import pytest

from clam import HkParams, PrimeProfiles, decompose, default_psi, hk, hk_prime, iterate_chain, small_valuation_sum
from clam.hk import SmallXWarning, hk_counts

from oracles import hk_nested, prime_divisors, vq

L2, L3, L5 = math.log(2), math.log(3), math.log(5)


def test_params(p7):
    assert p7.y == pytest.approx(2.779943, abs=1e-6)
    assert p7.threshold == pytest.approx(7.728081, abs=1e-6)
    assert abs(math.log(math.log(p7.x)) - p7.y) <= 1e-12
    assert p7.threshold == p7.y**2
    assert p7.small_primes == [2, 3, 5, 7]
    assert not p7.warning
    assert HkParams(1e6, 2).warning
    assert HkParams(10, 1).small_primes == []
    with pytest.raises(ValueError):
        HkParams(1.5, 2)
    with pytest.raises(ValueError):
        HkParams(100, 0)
    with pytest.warns(SmallXWarning):
        HkParams(1e5, 2).warn_if_small()


def test_default_psi():
    assert default_psi(2.0) == 1.0
    y = 50.0
    assert default_psi(y) == pytest.approx(math.log(y) / math.log(math.log(y)))


def test_hk_examples(small, p7):
    assert hk(11, p7, small) == pytest.approx(2 * L2, abs=1e-12)
    assert hk(1, p7, small) == 0
    assert hk(77, p7, small) == pytest.approx(3 * L2, abs=1e-12)
    assert hk(77, p7, small) == pytest.approx(hk(7, p7, small) + hk(11, p7, small), abs=1e-12)
    with pytest.raises(ValueError):
        hk(small.limit + 1, p7, small)


def test_hk_prime_examples(small, p7):
    assert hk_prime(11, p7, small) == pytest.approx(2 * L2, abs=1e-12)
    for k in (1, 2, 3, 5):
        assert hk_prime(2, HkParams(1e7, k), small) == 0
    assert hk_prime(3, HkParams(1e7, 1), small) == pytest.approx(L2, abs=1e-12)
    with pytest.raises(ValueError):
        hk_prime(9, p7, small)


def test_small_valuation_examples(small, p7):
    assert small_valuation_sum(35, p7, small) == pytest.approx(3 * L2, abs=1e-12)
    assert small_valuation_sum(1, p7, small) == 0
    assert small_valuation_sum(11, p7, small) == pytest.approx(2 * L2, abs=1e-12)
    assert small_valuation_sum(11, p7, small) - hk(11, p7, small) == 0


def test_decompose_examples(small, p7):
    b = decompose(11, p7, small)
    assert (b.s1, b.s2) == (0, 0)
    assert b.s3 == pytest.approx(2 * L2) and b.s4 == pytest.approx(2 * L2) and b.log_ratio == 0
    b = decompose(35, p7, small)
    assert (b.s1, b.s2) == (0, 0)
    assert b.s3 == pytest.approx(3 * L2) and b.s4 == pytest.approx(L2) and b.log_ratio == pytest.approx(2 * L2)
    b = decompose(1, p7, small)
    assert (b.s1, b.s2, b.s3, b.s4, b.hk, b.log_ratio) == (0, 0, 0, 0, 0, 0)


def test_counterexample_to_pointwise_domination(small, p7):
    # 1541 = 23 * 67; both 22 and 66 carry the prime 11, so phi(1541) has
    # 11^2 and phi(11^2) contributes a single 10, while h_2 counts 11 - 1
    # once per branch: h_2 = 3 log 2 + 2 log 5 but s3 = 3 log 2 + log 5.
    assert iterate_chain(1541, 2, small).phi_chain == [1541, 1452, 440]
    assert hk_counts(1541, p7, small) == [3, 0, 2, 0]
    b = decompose(1541, p7, small)
    assert b.s3 == pytest.approx(3 * L2 + L5)
    assert b.hk == pytest.approx(3 * L2 + 2 * L5)
    assert hk_nested(1541, 1e7, 2) == pytest.approx(b.hk, abs=1e-12)
    assert b.s3 - b.hk < 0


def test_domination_by_distinct_prime_divisors(mid, p7):
    # the provable lower bound: sum over distinct p | phi_{k-1}(n) of v_q(p-1) <= v_q(phi_k(n))
    rng = random.Random(7)
    for n in rng.sample(range(1, mid.limit + 1), 3000):
        c = iterate_chain(n, 2, mid)
        for q in p7.small_primes:
            floor = sum(vq(q, p - 1) for p in prime_divisors(c.phi_chain[1])) if c.phi_chain[1] > 1 else 0
            assert floor <= vq(q, c.phi_k)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_hk_matches_nested_oracle(small, k):
    params = HkParams(1e7, k)
    for n in range(1, 2001):
        assert hk(n, params, small) == pytest.approx(hk_nested(n, 1e7, k), abs=1e-9)


def test_bulk_matches_scalar(small):
    for x, k in ((1e7, 1), (1e7, 2), (1e7, 3), (1e5, 2), (5e3, 4)):
        params = HkParams(x, k)
        prof = PrimeProfiles.build(params, small)
        bulk = prof.hk_values(1, small.limit, small)
        cols = prof.decompose(1, small.limit, small)
        for n in range(1, small.limit + 1, 13):
            assert bulk[n - 1] == hk(n, params, small)
            b = decompose(n, params, small)
            for f in ("s1", "s2", "s3", "s4", "hk"):
                assert cols[f][n - 1] == pytest.approx(getattr(b, f), abs=1e-12)
            assert cols["split_ratio"][n - 1] == pytest.approx(b.log_ratio, abs=1e-12)
        ps = prof.primes
        vals = prof.prime_values()
        for i in range(0, len(ps), 17):
            assert vals[i] == hk_prime(int(ps[i]), params, small)


def test_strong_additivity(mid, p7):
    rng = random.Random(3)
    done = 0
    while done < 2000:
        m = rng.randint(1, 1000)
        n = rng.randint(1, 10**5 // m)
        if math.gcd(m, n) != 1:
            continue
        assert hk(m * n, p7, mid) == pytest.approx(hk(m, p7, mid) + hk(n, p7, mid), abs=1e-9)
        done += 1
    for p in (2, 3, 5, 7, 11, 13, 31, 97):
        a = 1
        while p ** (a + 1) <= 10**5:
            a += 1
            assert hk(p**a, p7, mid) == pytest.approx(hk(p, p7, mid), abs=1e-9)


def test_component_invariants(mid):
    for k in (2, 3):
        params = HkParams(1e7, k)
        cols = PrimeProfiles.build(params, mid, upto=10**5).decompose(1, 10**5, mid)
        for f in ("s1", "s2", "s3", "s4", "hk"):
            assert cols[f].min() >= 0
        resid = cols["s1"] + cols["s2"] + cols["s3"] - cols["s4"] - cols["split_ratio"]
        assert np.abs(resid).max() <= 1e-9


def test_gap_column_is_integer_difference(small, p7):
    prof = PrimeProfiles.build(p7, small)
    cols = prof.decompose(1, small.limit, small)
    assert np.allclose(cols["gap"], cols["s3"] - cols["hk"], atol=1e-12)
    margin, _ = prof.min_margin(1, small.limit, small)
    assert margin < 0
    assert cols["gap"][1541 - 1] == pytest.approx(-math.log(5))
