import cmath

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from etalab.analytic import eta_continuation, eta_m, eta_m_derivatives, eta_series, log_zeta
from etalab.batch import eta_batch
from etalab.errors import CutViolation, DomainError
from etalab.sieve import lambda_table
from etalab.zeros import ZeroCatalog


def _direct(m, s, N=200000):
    tab = lambda_table(N)
    return complex(np.sum(tab.lam / (tab.n.astype(float) ** s * tab.logn ** (m + 1))))


@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_series_matches_direct_dirichlet(m):
    s = 3.0 + 2.0j
    assert abs(eta_series(m, s)[0] - _direct(m, s)) < 1e-12


def test_log_zeta_oracle():
    assert abs(eta_series(0, 2)[0] - np.log(np.pi**2 / 6)) < 1e-14
    s = 0.7 + 30j
    z = complex(mpmath.zeta(s))
    assert abs(cmath.exp(eta_continuation(0, s)[0]) - z) < 1e-12


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 3), st.floats(1.1, 4), st.floats(-60, 60))
def test_series_vs_continuation(m, sigma, t):
    s = complex(sigma, t)
    assert abs(eta_series(m, s)[0] - eta_continuation(m, s)[0]) < 1e-10


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 3), st.floats(0.55, 2.5), st.floats(5, 200))
def test_finite_difference_chain(m, sigma, t):
    # d/dsigma eta_m = -eta_{m-1}
    s = complex(sigma, t)
    h = 1e-4
    fd = (eta_m(m, s + h) - eta_m(m, s - h)) / (2 * h)
    assert abs(fd + eta_m(m - 1, s)) < 1e-6 * max(1, abs(eta_m(m - 1, s)))


def test_conjugate_symmetry():
    for m in range(3):
        s = 0.8 + 77.7j
        assert abs(eta_m(m, s.conjugate()) - eta_m(m, s).conjugate()) < 1e-12


def test_batch_agrees_with_continuation(catalog):
    rng = np.random.default_rng(0)
    s = rng.uniform(0.55, 2.0, 30) + 1j * rng.uniform(-500, 500, 30)
    for m in (0, 2):
        b = eta_batch(m, s, catalog=catalog, threads=2)
        c = np.array([eta_continuation(m, x, catalog)[0] for x in s])
        assert np.max(np.abs(b - c)) < 1e-11


def test_batch_thread_independent(catalog):
    s = np.linspace(0.6, 0.9, 7)[None, :] + 1j * np.linspace(1000, 1300, 200)[:, None]
    assert np.array_equal(eta_batch(1, s, catalog=catalog, threads=1), eta_batch(1, s, catalog=catalog, threads=4))


def test_cauchy_derivatives():
    s = 0.75 + 40j
    d = eta_m_derivatives(2, s, 3)
    assert abs(d[1] + eta_m(1, s)) < 1e-9
    assert abs(d[2] - eta_m(0, s)) < 1e-8


def test_domain_errors():
    with pytest.raises(DomainError):
        eta_m(0, 0.4 + 10j)
    with pytest.raises(DomainError):
        eta_m(0, 1.0)
    with pytest.raises(DomainError):
        eta_m(0, 0.9)  # on the real cut


def test_synthetic_off_line_zero_cut():
    cat = ZeroCatalog.synthetic([(0.8, 50.0)])
    with pytest.raises(CutViolation):
        log_zeta(0.7 + 50j, catalog=cat)
    with pytest.raises(CutViolation):
        eta_m_derivatives(0, 0.85 + 50.05j, 1, radius=0.1, catalog=cat)
