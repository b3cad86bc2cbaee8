import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.integrate import trapezoid

from etalab.analytic import eta_m
from etalab.errors import CutViolation, EmptySample, GridMismatch, ZeroFrequency
from etalab.intervals import ShiftIntervalSet
from etalab.lab import (MetricSpec, bin_vectors, denseness_probe, distribution_compare, equidistribution_check,
                        exact_time_mean, metric_d, random_prime_tuples, shift_search, shifted_values,
                        stratified_shifts, sup_on_K)
from etalab.prime_sums import prime_sum_grid
from etalab.zeros import CompactRectSpec, ZeroCatalog, k_grid, valid_shifts

SPEC = MetricSpec((0.6, 0.9, -1.0, 1.0), J_max=12, resolution=4)
grids = st.lists(arrays(complex, (4, 4), elements=st.complex_numbers(max_magnitude=3, allow_nan=False)),
                 min_size=12, max_size=12)


def test_metric_examples():
    f = [np.zeros((4, 4))] * 12
    assert metric_d(f, f, SPEC) == 0
    g = [np.ones((4, 4))] * 12
    assert metric_d(f, g, SPEC) == 0.999755859375
    with pytest.raises(GridMismatch):
        metric_d(f[:3], g, SPEC)
    with pytest.raises(GridMismatch):
        metric_d(f, [np.ones((3, 3))] * 12, SPEC)


@settings(max_examples=60, deadline=None)
@given(grids, grids, grids)
def test_metric_symmetric_triangle(f, g, h):
    assert metric_d(f, g, SPEC) == metric_d(g, f, SPEC)
    assert metric_d(f, h, SPEC) <= metric_d(f, g, SPEC) + metric_d(g, h, SPEC) + 1e-12
    assert 0 <= metric_d(f, g, SPEC) <= 1 - 2.0**-12


def test_metric_rects_nested():
    for j in range(1, 12):
        a, b, c, d = SPEC.rect(j)
        A, B, C, D = SPEC.rect(j + 1)
        assert A < a and b < B and C < c and d < D


K = CompactRectSpec(0.7, 0.8, -0.05, 0.05, M=64)


def test_sup_on_K_self_and_point():
    tau = 500.0
    pts = np.concatenate(k_grid(K))
    vals = shifted_values(0, [tau], K)[0]
    assert sup_on_K(0, tau, K, vals) <= 1e-9
    P = CompactRectSpec.point(0.75 + 0j)
    target = [0.1 + 0.2j]
    assert abs(sup_on_K(0, tau, P, target) - abs(eta_m(0, 0.75 + 1j * tau) - target[0])) < 1e-12
    with pytest.raises(CutViolation):
        sup_on_K(0, 0.0, K, [0.0])


def test_sup_on_K_refinement():
    # max |log zeta| over K + 100i with the default grid vs a 10x finer boundary
    fine = CompactRectSpec(K.sigma_min, K.sigma_max, K.t_min, K.t_max, M=2560)
    coarse = CompactRectSpec(K.sigma_min, K.sigma_max, K.t_min, K.t_max, M=256)
    a, b = sup_on_K(0, 100.0, coarse, [0.0]), sup_on_K(0, 100.0, fine, [0.0])
    assert abs(a - b) < 1e-4


def test_shift_search_plant(catalog):
    T, num = 1000.0, 40
    valid = valid_shifts(catalog, K, T)
    taus = stratified_shifts(valid, num, 5)
    target = shifted_values(0, [taus[11]], K, catalog=catalog)[0]
    res = shift_search(0, K, target, 1e-3, T, num, 5, catalog)
    assert 11 in res.passing_strata and res.density_estimate >= 1 / num
    assert shift_search(0, K, target, math.inf, T, num, 5, catalog).density_estimate == 1
    assert shift_search(0, K, target, 0.0, T, num, 5, catalog).density_estimate == 0
    assert res.to_json() == shift_search(0, K, target, 1e-3, T, num, 5, catalog).to_json()


def test_stratified_one_per_stratum():
    v = ShiftIntervalSet([(0, 10), (20, 25)])
    t = stratified_shifts(v, 15, 0)
    assert all(v.contains(x) for x in t)
    assert np.all(np.diff(t) > 0)
    with pytest.raises(EmptySample):
        stratified_shifts(ShiftIntervalSet(), 3, 0)


def test_bin_vectors_and_monotone(catalog):
    h = bin_vectors(np.array([[0.0 + 0.0j], [0.79 - 0.79j], [5.0]]), (-0.8, 0.8, -0.8, 0.8), 4)
    assert h.sum() == 2 and h[2, 2] and h[3, 0]
    box = [-0.8, 0.8, -0.8, 0.8]
    a = denseness_probe(1, 1, 0.75, 100, 0.1, box, 8, catalog).fraction_covered
    b = denseness_probe(1, 1, 0.75, 200, 0.1, box, 8, catalog).fraction_covered
    assert 0 <= a <= b <= 1
    assert denseness_probe(1, 2, 0.75, 1.0, 0.5, box, 4, catalog).hits.shape == (4, 4, 4, 4)


def test_exact_time_mean_matches_quadrature():
    v = ShiftIntervalSet([(1000.0, 1010.0), (1020.0, 1030.0)])
    tau = np.concatenate([np.linspace(lo, hi, 20001) for lo, hi in v])
    vals = prime_sum_grid(0, [0.8], tau, 50)[:, 0].reshape(2, -1)
    quad = sum(trapezoid(r, np.linspace(lo, hi, 20001)) for r, (lo, hi) in zip(vals, v)) / v.measure
    assert abs(exact_time_mean(0, 0.8, 50, v) - quad) < 1e-7


def test_distribution_compare_runs(catalog):
    r = distribution_compare(0, 0.75, 1000, 200, 1000, 200, 1, catalog, bootstrap=5)
    assert 0 <= r["js_divergence"] <= math.log(2)
    assert abs(r["model_second"] - r["oracle_second"]) < 5 * r["model_second_se"]
    with pytest.raises(EmptySample):
        distribution_compare(0, 0.75, 1000, 0, 1000, 0, 1, catalog)


def test_equidistribution_examples():
    assert equidistribution_check([2, 3], [0, 0], 100) == (1 + 0j, 1.0)
    T = 1e4
    emp, bound = equidistribution_check([2], [1], T)
    closed = abs(2 ** (2j * T) - 2 ** (1j * T)) / (T * math.log(2))
    assert abs(abs(emp) - closed) < 1e-12 and bound == 2 / (T * math.log(2))
    emp, bound = equidistribution_check([2, 3], [1, -1], T)
    assert abs(bound - 4.93e-4) < 1e-6 and abs(emp) <= bound
    with pytest.raises(ZeroFrequency):
        equidistribution_check([2, 2], [1, -1], T)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.floats(1, 1e6))
def test_equidistribution_bound_property(seed, T):
    ps, ns = random_prime_tuples(1, seed)[0]
    emp, bound = equidistribution_check(ps, ns, T)
    assert abs(emp) <= bound
