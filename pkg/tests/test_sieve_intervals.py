import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from etalab.intervals import ShiftIntervalSet
from etalab.sieve import lambda_table, primes_upto, von_mangoldt_naive


def test_primes_small():
    assert primes_upto(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert len(primes_upto(10**4)) == 1229


def test_psi_recount():
    tab = lambda_table(2000)
    for y in (1, 2, 10, 97, 100, 1000, 2000):
        naive = math.fsum(von_mangoldt_naive(n) for n in range(1, y + 1))
        assert abs(tab.psi(y) - naive) < 1e-9


def test_table_entries():
    tab = lambda_table(100)
    k = tab.n.tolist().index(64)
    assert tab.base[k] == 2 and tab.power[k] == 6
    assert np.allclose(tab.lam[k], math.log(2))
    assert 6 not in tab.n.tolist()


intervals = st.lists(st.tuples(st.floats(-50, 50), st.floats(0, 10)).map(lambda p: (p[0], p[0] + p[1])),
                     max_size=6).map(ShiftIntervalSet)


@settings(max_examples=80, deadline=None)
@given(intervals, intervals)
def test_inclusion_exclusion(a, b):
    lhs = (a | b).measure + (a & b).measure
    assert abs(lhs - (a.measure + b.measure)) < 1e-9


@settings(max_examples=80, deadline=None)
@given(intervals, intervals)
def test_difference_partition(a, b):
    assert abs((a - b).measure + (a & b).measure - a.measure) < 1e-9
    assert (a - b).issubset(a, tol=1e-12)


@settings(max_examples=50, deadline=None)
@given(intervals, st.floats(0, 1))
def test_from_measure_inverts(a, u):
    if a.is_empty():
        return
    x = float(a.from_measure(u * a.measure))
    assert a.contains(x)
    # cumulative measure up to x equals the offset
    below = (a & ShiftIntervalSet.interval(a.lo - 1, x)).measure
    assert abs(below - u * a.measure) < 1e-9


def test_measure_slice_and_csv():
    a = ShiftIntervalSet([(0, 1), (2, 4), (10, 11)])
    s = a.measure_slice(0.5, 2.5)
    assert s.to_list() == [[0.5, 1.0], [2.0, 3.5]]
    assert ShiftIntervalSet.from_csv(a.to_csv()) == a
