"""
Scanning log(n/lambda_k(n)) over a range
========================================

Records are columnar; the summary counts integers outside the
y^k psi / (k-1)! window around the predicted normal order.
"""

# %%
import io

import numpy as np

from clam import HkParams, Tables, scan

tables = Tables.build(10**6)
params = HkParams(1e6, 2)
records, summary = scan(2, 10**6, 2, params, tables, workers=4)
print(summary)

# %%
# Distribution of the normalized statistic; convergence to 1 is far too slow to see here.
z = records.columns["normalized"]
print(np.percentile(z, [5, 25, 50, 75, 95]).round(3))

# %%
buf = io.StringIO()
records.write_csv(buf)
print(buf.getvalue()[:300])
