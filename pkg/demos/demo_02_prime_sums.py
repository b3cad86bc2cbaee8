"""
Prime sums and the smooth cutoff
================================

Sharp and smoothed truncations of the prime-power series, and the Mellin
transform of the cutoff function that links them.
"""

import numpy as np

from etalab import ScanRequest, batched_scan, eta_m, smoothed_sum, truncated_sum
from etalab.prime_sums import decay_fit, mellin_inversion_check, mellin_phi, residue_check

s = 0.9 + 250j
exact = eta_m(0, s)
print("log zeta(s) =", exact)
for y in (1e2, 1e3, 1e4, 1e5):
    print(f"y={y:8.0f}  sharp error {abs(truncated_sum(0, s, y) - exact):.4f}"
          f"  smoothed error {abs(smoothed_sum(0, s, y) - exact):.4f}")

# The Mellin transform of the cutoff has a simple pole at 0 with residue 1,
# decays faster than any power on vertical lines, and can be inverted.
print("s * phi-hat(s) at s = 1e-4:", residue_check())
fit = decay_fit(N=4)
print(f"|phi-hat(-1/2 + it)| <= {fit['C']:.1f} (1 + t)^-4 on [1, 200], stable: {fit['stable']}")
print("phi-hat(1) =", mellin_phi(1), "(the area under phi)")
print("worst inversion error on [0.1, 3]:",
      max(mellin_inversion_check(x) for x in np.linspace(0.1, 3, 20)))

# A scan over 10^5 shifts is a single matrix product.
req = ScanRequest(m=0, sigma=0.75, tau0=1e4, step=0.01, count=10**5, y=1e3, smoothed=False)
v = batched_scan(req)
print("scan:", v.shape, " mean |S| =", np.abs(v).mean())
