"""
Mixed phi/lambda iterates
=========================

Words over {P, L} are read outermost-first. The number of leading P's is l and
the predicted loglog exponent is the word length minus l.
"""

# %%
import numpy as np

from clam import Tables, eval_pattern, parse_pattern, product_bound_check
from clam.normal_order import eval_pattern_many

tables = Tables.build(10**6)

# %%
for word in ("L", "PL", "LP", "PPLPPLLP", "PPP"):
    pat = parse_pattern(word)
    print(word, "l =", pat.l, "k_eff =", pat.k_eff, "g(10^6 - 1) =", eval_pattern(10**6 - 1, pat, tables))

# %%
# k_eff counts every symbol after the leading P run, so PPLPPLLP gives 6.
n = np.arange(10**5, 10**6)
g = eval_pattern_many(n, "PPLPPLLP", tables)
print("mean log(n/g(n)):", float(np.mean(np.log(n / g))))

# %%
print(product_bound_check(2, 2, tables), product_bound_check(5, 3, tables))
