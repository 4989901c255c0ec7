"""
Prime moments of h_k and the Turan-Kubilius ratio
=================================================
"""

# %%
from clam import C_TK, Tables, m1_predicted, tk_check
from clam.moments import prime_moments

tables = Tables.build(10**7)

# %%
for x in (10**5, 10**6, 10**7):
    _, _, m1, m2 = prime_moments(x, 2, tables)
    print(f"x=1e{len(str(x)) - 1}: M1={m1:.4f}  M2={m2:.4f}  predicted={m1_predicted(x, 2):.4f}  ratio={m1 / m1_predicted(x, 2):.4f}")

# %%
# The variance of h_k(n) around M1 against x * M2; the ratio stays far below C_TK.
for x in (10**5, 10**6):
    for k in (1, 2):
        r = tk_check(x, k, tables)
        print(x, k, round(r.tk_ratio, 4), "<=", C_TK)
