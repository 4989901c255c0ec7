"""
The additive approximant h_k and the four-way split
===================================================

log(phi_k(n)/lambda_k(n)) is cut into large primes appearing once (s1),
large primes appearing repeatedly (s2), small primes in phi_k (s3) and small
primes in lambda_k (s4). h_k approximates s3.
"""

# %%
import math


from clam import HkParams, PrimeProfiles, Tables, decompose
from clam.hk import hk_counts

tables = Tables.build(10**6)
params = HkParams(1e7, 2)
print("y =", params.y, " small primes:", params.small_primes)

# %%
for n in (11, 35, 77, 1541, 587861):
    b = decompose(n, params, tables)
    print(n, {k: round(v, 4) for k, v in vars(b).items()}, "residual", b.residual())

# %%
# h_k counts every chain once per prime divisor of n. When two branches share
# an intermediate prime, phi only sees that prime's p - 1 once, so h_k can
# overshoot the small-prime part of phi_k(n). 1541 = 23 * 67 is the first case.
print(hk_counts(1541, params, tables))
b = decompose(1541, params, tables)
print("s3 =", b.s3, " h_k =", b.hk, " gap =", b.s3 - b.hk, "= -log 5:", -math.log(5))

# %%
# Across the whole range the overshoot is rare.
cols = PrimeProfiles.build(params, tables, upto=10**6).decompose(1, 10**6, tables)
gap = cols["s3"] - cols["hk"]
print("negative gaps:", int((gap < 0).sum()), "of", len(gap))
print("mean s1, s2, s3, s4, hk:", [round(float(cols[f].mean()), 4) for f in ("s1", "s2", "s3", "s4", "hk")])
