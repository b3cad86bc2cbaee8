import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from etalab.errors import DomainError
from etalab.polylog import polylog
from etalab.zeta import critical_zeros, hardy_z, zeta

# first ordinates, frozen from mpmath.zetazero
FIRST_ZEROS = [14.134725141734693, 21.022039638771555, 25.010857580145688, 30.424876125859513]


@pytest.mark.parametrize("J", [1, 2, 3, 5])
@pytest.mark.parametrize("z", [0.3, -0.7 + 0.2j, 0.9j, 0.99 * np.exp(2.5j), 0.999999])
def test_polylog_mpmath(J, z):
    assert abs(polylog(J, z) - complex(mpmath.polylog(J, z))) < 1e-13 * max(1, abs(polylog(J, z)))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.floats(0, 0.97), st.floats(-math.pi, math.pi))
def test_polylog_derivative_identity(J, r, a):
    # z d/dz Li_J(z) = Li_{J-1}(z), checked by a central difference in log z
    z = r * np.exp(1j * a)
    if r < 1e-3:
        return
    h = 1e-5
    d = (polylog(J, z * np.exp(h)) - polylog(J, z * np.exp(-h))) / (2 * h)
    assert abs(d - polylog(J - 1, z)) < 1e-6 * max(1, abs(polylog(J - 1, z)))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 5), st.floats(0.1, 0.95), st.floats(-3, 3), st.floats(-3, 3))
def test_polylog_lipschitz(J, r, a, b):
    # |Li_J(z) - Li_J(w)| <= Li_{J-1}(r) |z - w| / r on the circle of radius r
    z, w = r * np.exp(1j * a), r * np.exp(1j * b)
    bound = polylog(J - 1, r).real / r * abs(z - w)
    assert abs(polylog(J, z) - polylog(J, w)) <= bound * (1 + 1e-12) + 1e-15


def test_polylog_domain():
    with pytest.raises(DomainError):
        polylog(2, 1.0)
    with pytest.raises(DomainError):
        polylog(0, 0.5)


@pytest.mark.parametrize("s", [2, 0.5 + 14j, 0.7 + 30j, 1.5 - 3j, 0.8 + 1000.5j, 0.6 + 5000j])
def test_zeta_mpmath(s):
    ref = complex(mpmath.zeta(s))
    assert abs(zeta(s) - ref) <= 1e-12 * max(1, abs(ref))


def test_zeta_real_values():
    assert abs(zeta(2) - math.pi**2 / 6) < 1e-14
    assert abs(zeta(4) - math.pi**4 / 90) < 1e-14


def test_first_zeros():
    z = critical_zeros(31)
    assert len(z) == 4
    assert np.max(np.abs(np.array(z) - FIRST_ZEROS)) < 1e-10
    assert all(abs(hardy_z(g)) < 1e-9 for g in z)


def test_fixture_matches_scan(catalog):
    z = critical_zeros(200)
    assert np.max(np.abs(np.array(z) - catalog.gammas[: len(z)])) < 1e-10
    assert len(catalog) == 649 and catalog.gammas[-1] < 1000


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 4), st.complex_numbers(max_magnitude=0.9), st.complex_numbers(max_magnitude=0.9))
def test_polylog_pair_lipschitz(m, w1, w2):
    # |Li_{m+1}(w1) - Li_{m+1}(w2)| <= |w1 - w2| / (1 - max |w|)
    bound = abs(w1 - w2) / (1 - max(abs(w1), abs(w2)))
    assert abs(polylog(m + 1, w1) - polylog(m + 1, w2)) <= bound * (1 + 1e-12) + 1e-15
