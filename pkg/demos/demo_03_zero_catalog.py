"""
Zeros and admissible shifts
===========================

The bundled zero table, the shift sets that keep a rectangle away from the
branch cuts, and what happens with a hypothetical zero off the line.
"""

from etalab import CompactRectSpec, ZeroCatalog, derive_constants, exclusion_set, load_fixture, valid_shifts
from etalab.zeta import critical_zeros

catalog = load_fixture()
print(len(catalog), "zeros up to height", catalog.height_bound)
print("first three:", catalog.gammas[:3])
print("recomputed :", critical_zeros(26))

K = CompactRectSpec(0.7, 0.8, -0.05, 0.05)
c = derive_constants(K)
print("sigma0 =", c.sigma0, " |K| =", c.abs_K, " enclosing rectangle", c.R)

# Under RH every zero sits on the line, to the left of sigma0, so the
# admissible set is the whole window.
I = valid_shifts(catalog, K, 400)
print("admissible measure in [400, 800]:", I.measure)

# A synthetic zero with beta = 0.9 removes a window around its ordinate.
fake = ZeroCatalog.synthetic([(0.9, 500.0), (0.55, 600.0)])
print(exclusion_set(fake, c.sigma0, c.tau0, c.abs_K + 1, (400, 800)))
