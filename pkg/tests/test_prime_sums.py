import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from etalab.errors import InvalidStep
from etalab.prime_sums import (ScanRequest, batched_scan, decay_fit, gs_error_bound, mellin_inversion_check,
                               mellin_phi, mellin_phi_vec, phi, phi_prime, prime_sum_grid, residue_check,
                               smoothed_sum, truncated_sum, write_scan_csv)
from etalab.analytic import eta_m


def test_phi_shape():
    x = np.array([0.0, 0.5, 1.0, 1.5, 2.0, 3.0])
    assert np.allclose(phi(x), [1, 1, 1, 0.5, 0, 0])
    assert np.all(np.diff(phi(np.linspace(0, 3, 500))) <= 0)
    h = 1e-6
    for x0 in (1.2, 1.5, 1.9):
        assert abs((phi(x0 + h) - phi(x0 - h)) / (2 * h) - phi_prime(x0)) < 1e-6


def test_truncated_small():
    assert abs(truncated_sum(0, 2, 2) - 0.25) < 1e-15
    assert truncated_sum(0, 2, 1.5) == 0
    # Lambda(n) / (n^2 log n) = 1 / (k n^2) for n = p^k
    expected = math.fsum(1 / (n**2 * k) for n, k in [(2, 1), (3, 1), (4, 2), (5, 1), (7, 1), (8, 3), (9, 2)])
    assert abs(truncated_sum(0, 2, 10) - expected) < 1e-14


def test_smoothed_converges():
    s = 0.9 + 100j
    target = eta_m(0, s)
    errs = [abs(smoothed_sum(0, s, X) - target) for X in (1e2, 1e3, 1e4)]
    assert errs[0] > errs[1] > errs[2]


def test_mellin_checks():
    assert abs(mellin_phi(1) - 1.5) < 1e-12  # integral of phi(x) dx
    assert abs(residue_check() - 1) < 1e-3
    fit = decay_fit()
    assert fit["stable"]
    for x in (0.3, 1.0, 1.5, 2.5):
        assert mellin_inversion_check(x) < 1e-6


@settings(max_examples=30, deadline=None)
@given(st.floats(0.2, 3), st.floats(-40, 40))
def test_mellin_vec_matches_adaptive(sigma, t):
    s = complex(sigma, t)
    assert abs(mellin_phi_vec(np.array([s]))[0] - mellin_phi(s)) < 1e-10 * max(1, abs(mellin_phi(s)))


def test_scan_matches_pointwise():
    req = ScanRequest(1, 0.75, 1000.0, 0.37, 2000, 500.0, False)
    v = batched_scan(req)
    ref = prime_sum_grid(1, [0.75], req.taus[::97], 500.0)[:, 0]
    assert np.max(np.abs(v[::97] - ref)) < 1e-11
    buf = io.StringIO()
    write_scan_csv(buf, req.taus[:2], v[:2])
    assert buf.getvalue().startswith("tau,re,im\n")
    with pytest.raises(InvalidStep):
        ScanRequest(0, 0.75, 0, 0.0, 10, 100.0, False)


def test_gs_bound_shape():
    # sigma1 = (sigma + sigma0)/2 = 0.75 here
    ref = math.log(1e5) / 0.05**2 * 1e4**-0.05
    assert abs(gs_error_bound(0, 0.8, 0.7, 1e4, 1e5) - ref) < 1e-9 * ref
    # here sigma1 = sigma0 + 1/log y
    y = 1e4
    s1 = 0.5 + 1 / math.log(y)
    ref = math.log(2e4) * math.log(y) ** 2 * y ** (s1 - 1.0)
    assert abs(gs_error_bound(0, 1.0, 0.5, y, 2e4) - ref) < 1e-9 * ref
