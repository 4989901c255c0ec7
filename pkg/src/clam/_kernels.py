"""Numba kernels behind the bulk table and range computations.

Everything here works on plain numpy arrays so the public modules can wrap
them in typed containers. Kernels that run inside range scans are compiled
with ``nogil=True`` so chunks can be evaluated from a thread pool.
"""
import math

import numba
import numpy as np

_JIT = dict(cache=True, nogil=True)


@numba.njit(**_JIT)
def linear_sieve(limit):
    # each composite i*p is written exactly once, by its least prime p
    spf = np.zeros(limit + 1, np.uint32)
    primes = np.empty(max(16, int(1.26 * limit / max(1.0, math.log(limit))) + 16), np.uint32)
    count = 0
    for i in range(2, limit + 1):
        if spf[i] == 0:
            spf[i] = i
            primes[count] = i
            count += 1
        s = spf[i]
        bound = limit // i
        for j in range(count):
            p = primes[j]
            if p > s or p > bound:
                break
            spf[i * p] = p
    return spf, primes[:count].copy()


@numba.njit(**_JIT)
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@numba.njit(**_JIT)
def phi_lambda_tables(spf, limit):
    phi = np.zeros(limit + 1, np.uint32)
    lam = np.zeros(limit + 1, np.uint32)
    if limit >= 1:
        phi[1] = 1
        lam[1] = 1
    for n in range(2, limit + 1):
        p = np.int64(spf[n])
        m = np.int64(n)
        pe = np.int64(1)
        while m % p == 0:
            m //= p
            pe *= p
        phi_pe = pe - pe // p
        if p == 2 and pe >= 8:
            lam_pe = pe // 4
        elif p == 2:
            lam_pe = pe // 2
        else:
            lam_pe = phi_pe
        phi[n] = np.int64(phi[m]) * phi_pe
        a = np.int64(lam[m])
        lam[n] = a // _gcd(a, lam_pe) * lam_pe
    return phi, lam


@numba.njit(**_JIT)
def prime_index(primes, p):
    return np.searchsorted(primes, p)


@numba.njit(**_JIT)
def chain_counts(spf, primes, nprimes, qidx, nq, k):
    """Integer small-prime exponent profile of the prime chains, per prime.

    Row i holds, for every small prime q, the total multiplicity with which
    q is counted over all chains p_1 = primes[i], p_2 | p_1 - 1, ...,
    p_k | p_{k-1} - 1, i.e. sum of v_q(p_k - 1). ``qidx[r]`` is the column
    of the small prime r, or -1.
    """
    qmax = qidx.shape[0] - 1
    cur = np.zeros((nprimes, nq), np.int32)
    for i in range(nprimes):
        m = np.int64(primes[i]) - 1
        while m > 1:
            r = np.int64(spf[m])
            e = 0
            while m % r == 0:
                m //= r
                e += 1
            if r <= qmax and qidx[r] >= 0:
                cur[i, qidx[r]] = e
    for _ in range(k - 1):
        nxt = np.zeros((nprimes, nq), np.int32)
        for i in range(nprimes):
            m = np.int64(primes[i]) - 1
            while m > 1:
                r = np.int64(spf[m])
                while m % r == 0:
                    m //= r
                t = np.searchsorted(primes, r)
                for j in range(nq):
                    nxt[i, j] += cur[t, j]
        cur = nxt
    return cur


@numba.njit(**_JIT)
def additive_counts(lo, hi, spf, primes, counts):
    nq = counts.shape[1]
    out = np.zeros((hi - lo + 1, nq), np.int32)
    for n in range(lo, hi + 1):
        m = np.int64(n)
        row = n - lo
        while m > 1:
            p = np.int64(spf[m])
            while m % p == 0:
                m //= p
            t = np.searchsorted(primes, p)
            for j in range(nq):
                out[row, j] += counts[t, j]
    return out


@numba.njit(**_JIT)
def weighted(counts, logq):
    # ascending-q accumulation; matches the scalar path term for term
    n = counts.shape[0]
    out = np.zeros(n, np.float64)
    for i in range(n):
        s = 0.0
        for j in range(counts.shape[1]):
            s += counts[i, j] * logq[j]
        out[i] = s
    return out


@numba.njit(**_JIT)
def iterate(values, ns, k):
    out = ns.astype(np.int64)
    for i in range(out.shape[0]):
        v = out[i]
        for _ in range(k):
            v = np.int64(values[v])
        out[i] = v
    return out


@numba.njit(**_JIT)
def decompose_range(lo, hi, k, threshold, spf, phi, lam, primes, counts, qidx, logq):
    """Per-n four-way split of log(phi_k/lambda_k) plus the h_k profile.

    Returns phi_k, lambda_k, s1, s2, s3, s4, hk, gap, log_ratio where ``gap``
    is the small-prime sum minus h_k accumulated from integer differences
    and log_ratio is log(n / lambda_k(n)).
    """
    size = hi - lo + 1
    nq = logq.shape[0]
    qmax = qidx.shape[0] - 1
    phik = np.empty(size, np.int64)
    lamk = np.empty(size, np.int64)
    s1 = np.zeros(size)
    s2 = np.zeros(size)
    s3 = np.zeros(size)
    s4 = np.zeros(size)
    hk = np.zeros(size)
    gap = np.zeros(size)
    log_ratio = np.zeros(size)
    vphi = np.zeros(nq, np.int64)
    vlam = np.zeros(nq, np.int64)
    hcnt = np.zeros(nq, np.int64)
    for n in range(lo, hi + 1):
        row = n - lo
        a = np.int64(n)
        b = np.int64(n)
        for _ in range(k):
            a = np.int64(phi[a])
            b = np.int64(lam[b])
        phik[row] = a
        lamk[row] = b
        log_ratio[row] = math.log(n / b)
        for j in range(nq):
            vphi[j] = 0
            vlam[j] = 0
            hcnt[j] = 0
        m = a
        lb = b
        t1 = 0.0
        t2 = 0.0
        while m > 1:
            q = np.int64(spf[m])
            ep = 0
            while m % q == 0:
                m //= q
                ep += 1
            el = 0
            while lb % q == 0:
                lb //= q
                el += 1
            if q <= threshold:
                j = qidx[q] if q <= qmax else -1
                vphi[j] = ep
                vlam[j] = el
            elif ep == 1:
                t1 += (ep - el) * math.log(q)
            else:
                t2 += (ep - el) * math.log(q)
        m = np.int64(n)
        while m > 1:
            p = np.int64(spf[m])
            while m % p == 0:
                m //= p
            t = np.searchsorted(primes, p)
            for j in range(nq):
                hcnt[j] += counts[t, j]
        t3 = 0.0
        t4 = 0.0
        th = 0.0
        tg = 0.0
        for j in range(nq):
            t3 += vphi[j] * logq[j]
            t4 += vlam[j] * logq[j]
            th += hcnt[j] * logq[j]
            tg += (vphi[j] - hcnt[j]) * logq[j]
        s1[row] = t1
        s2[row] = t2
        s3[row] = t3
        s4[row] = t4
        hk[row] = th
        gap[row] = tg
    return phik, lamk, s1, s2, s3, s4, hk, gap, log_ratio


@numba.njit(**_JIT)
def min_small_margin(lo, hi, k, spf, phi, primes, counts, qidx):
    """Smallest per-prime margin v_q(phi_k(n)) - (h_k count for q) over a range.

    A nonnegative result certifies s3 - h_k >= 0 exactly for every n, since
    both sums are nonnegative integer combinations of the same log q.
    Returns (margin, n_at_margin).
    """
    nq = counts.shape[1]
    qmax = qidx.shape[0] - 1
    best = np.int64(1 << 40)
    arg = np.int64(-1)
    v = np.zeros(nq, np.int64)
    for n in range(lo, hi + 1):
        a = np.int64(n)
        for _ in range(k):
            a = np.int64(phi[a])
        for j in range(nq):
            v[j] = 0
        m = a
        while m > 1:
            q = np.int64(spf[m])
            e = 0
            while m % q == 0:
                m //= q
                e += 1
            if q <= qmax and qidx[q] >= 0:
                v[qidx[q]] = e
        m = np.int64(n)
        while m > 1:
            p = np.int64(spf[m])
            while m % p == 0:
                m //= p
            t = np.searchsorted(primes, p)
            for j in range(nq):
                v[j] -= counts[t, j]
        for j in range(nq):
            if v[j] < best:
                best = v[j]
                arg = n
    return best, arg
