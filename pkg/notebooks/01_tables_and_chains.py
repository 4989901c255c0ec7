"""
Tables, factorization and iterate chains
========================================

Build the least-prime-factor sieve once, derive phi and lambda from it, and
walk the iterated chains for a few integers.
"""

# %%

import numpy as np

from clam import Tables, carmichael, factorize, group_exponent_oracle, iterate_chain

tables = Tables.build(10**6)
print(tables.limit, "entries;", len(tables.spf.primes), "primes")

# %%
# Factorizations come straight off the sieve.
for n in (360, 561, 97, 1):
    f = factorize(n, tables.spf)
    print(n, f, "lambda =", carmichael(f))

# %%
# The fast lambda agrees with a brute-force search for the group exponent.
print(all(tables.lam[n] == group_exponent_oracle(n) for n in range(1, 2000)))

# %%
# Chains: phi_0..phi_k and lambda_1..lambda_k. The log ratio splits into the
# phi steps plus the final phi_k/lambda_k term.
chain = iterate_chain(587861, 3, tables)
print(chain)
terms = chain.telescoping_terms()
print([round(t, 4) for t in terms], "sum", round(sum(terms), 6), "log(n/lambda_k)", round(chain.log_ratio(), 6))

# %%
# Bulk iteration is just repeated fancy indexing into the tables.
n = np.arange(1, tables.limit + 1)
a, b = n, n
for k in range(1, 5):
    a, b = tables.phi.values[a], tables.lam.values[b]
    print(k, "lambda_k | phi_k everywhere:", bool(np.all(a % b == 0)),
          " mean log(n/lambda_k):", round(float(np.mean(np.log(n / b))), 3))
