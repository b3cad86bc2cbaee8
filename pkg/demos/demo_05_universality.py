"""
Plant and recover
=================

Hide a shift, use eta_0 on the shifted rectangle as the target, and let the
search find it among stratified samples of admissible shifts.
"""

import numpy as np

from etalab import CompactRectSpec, eta_batch, MetricSpec, load_fixture, metric_d, shift_search, valid_shifts
from etalab.lab import shifted_values, stratified_shifts

catalog = load_fixture()
K = CompactRectSpec(0.7, 0.8, -0.05, 0.05, M=64)
T, num, seed = 1000.0, 200, 3

taus = stratified_shifts(valid_shifts(catalog, K, T), num, seed)
planted = 57
target = shifted_values(0, [taus[planted]], K, catalog=catalog)[0]

res = shift_search(0, K, target, 1e-3, T, num, seed, catalog)
errs = np.array([e for _, e in res.sup_errors])
print("planted stratum", planted, " found", res.passing_strata, " density", res.density_estimate)
print("smallest sup errors:", np.sort(errs)[:4])

# The exhaustion metric between eta_0 shifted by two nearby amounts, sampled
# on the nested rectangles around K.
spec = MetricSpec.for_rect(K, J_max=8, resolution=6)
f = spec.sample(lambda z: eta_batch(0, z + 1000j, catalog=catalog))
for dt in (1e-3, 1e-1, 1.0):
    g = spec.sample(lambda z: eta_batch(0, z + (1000 + dt) * 1j, catalog=catalog))
    print(f"d(eta_0(. + 1000i), eta_0(. + {1000 + dt}i)) = {metric_d(f, g, spec):.4f}")
