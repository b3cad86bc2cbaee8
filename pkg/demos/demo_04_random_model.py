"""
The random Euler product
========================

Random phases on the primes, the moments of the resulting series and a
search for phases that imitate a given function.
"""

import numpy as np

from etalab import CompactRectSpec, eta_m_omega, fit_phases, model_moments, sample_omega
from etalab.random_model import omega_constant, partial_sum_path

w = sample_omega(seed=1, P=10**4)
print("omega(2), omega(4), omega(2)^2:", w(2), w(4), w(2) ** 2)
print("eta_1(0.75, omega) =", eta_m_omega(1, 0.75, w))
print("omega = 1 gives back the series at 2:", eta_m_omega(0, 2.0, omega_constant(10**4)))

# Orthogonality of omega(n) predicts the second moment exactly.
r = model_moments(0, 0.75, 10**4, 10**4, seed=7)
print(f"E|S|^2 = {r.second_abs:.4f} +- {r.second_se:.4f}, oracle {r.reference_second:.4f}")

primes, A = partial_sum_path(w, 0.6)
print("max partial sum along the primes:", np.abs(A).max())

# Pick the phases that best approximate a target on a rectangle.
K = CompactRectSpec(0.7, 0.8, -0.5, 0.5, M=64)
fit = fit_phases(1, [0.0], K, P=50, iterations=3, seed=0)
print("target 0: baseline sup", fit.baseline_sup, " fitted sup", fit.achieved_sup)
print("history", np.round(fit.history, 4))
