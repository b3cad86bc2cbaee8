"""
Iterated integrals of log zeta
==============================

Three independent ways to evaluate eta_m, the m-fold integral of log zeta
along horizontal rays, and a check that they agree.
"""

import numpy as np

from etalab import eta_batch, eta_continuation, eta_series, load_fixture, zeta

# Right of the line Re s = 1 the Dirichlet series converges and gives a
# reference value with an error bound.
s = 1.5 + 20j
for m in range(4):
    v_series, err = eta_series(m, s)
    v_cont, _ = eta_continuation(m, s)
    print(f"m={m}  series {v_series:.12f}  (bound {err:.1e})  |series - continuation| = "
          f"{abs(v_series - v_cont):.1e}")

# Inside the strip only the continuation is available.  exp(eta_0) must give
# zeta back, with the right branch of the logarithm.
catalog = load_fixture()
s = 0.7 + 123.4j
v, _ = eta_continuation(0, s, catalog)
print("exp(eta_0) - zeta at", s, "=", abs(np.exp(v) - zeta(s)))

# The batch engine evaluates whole grids at once.  It is the workhorse of the
# shift experiments.
sig = np.linspace(0.6, 0.95, 8)
t = np.linspace(1000, 1010, 500)
grid = sig[None, :] + 1j * t[:, None]
vals = eta_batch(2, grid, catalog=catalog)
check = eta_continuation(2, grid[123, 4], catalog)[0]
print("batch grid", vals.shape, " spot check difference", abs(vals[123, 4] - check))
