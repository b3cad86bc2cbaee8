"""
Denseness, value distribution and equidistribution
==================================================

Coverage of a box by eta_1 on a vertical line, the shift distribution against
the random model, and the closed-form equidistribution averages behind it.
"""

from etalab import distribution_compare, equidistribution_check, load_fixture
from etalab.lab import coverage_curve

catalog = load_fixture()
box = [-0.8, 0.8, -0.8, 0.8]
fr = coverage_curve(1, 1, 0.75, [250, 500, 1000, 2000], 0.05, box, 16, catalog)
print("fraction of 16x16 cells hit by eta_1(0.75 + it):", fr)

r = distribution_compare(0, 0.75, 1e4, 1000, 10**4, 1000, seed=5, catalog=catalog, bootstrap=10)
print(f"time E|.|^2 {r['time_second']:.4f}, model {r['model_second']:.4f}, oracle {r['oracle_second']:.4f}")
print(f"Jensen-Shannon divergence {r['js_divergence']:.3f} +- {r['js_se']:.3f}")

for primes, n in [([2], [1]), ([2, 3], [1, -1]), ([5, 7, 11], [2, 0, -1]), ([3], [0])]:
    emp, bound = equidistribution_check(primes, n, 1e4)
    print(primes, n, f"|average| {abs(emp):.3e} <= {bound:.3e}")
