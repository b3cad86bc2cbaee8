import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from etalab.errors import CatalogTooShort, DomainError, MonotonicityError, ParseError
from etalab.zeros import (CompactRectSpec, ZeroCatalog, derive_constants, ell_set, exclusion_set, k_grid,
                          parse_zeros, script_X_set, valid_shifts)


def test_derive_constants():
    c = derive_constants(CompactRectSpec(0.7, 0.8, -0.1, 0.1))
    assert math.isclose(c.sigma0, 0.6) and c.tau0 == 0 and math.isclose(c.abs_K, 0.2)
    sl, sr, tl, th = c.R
    assert c.sigma0 < sl < 0.7 and 0.8 < sr < 1 and tl == -0.6 and th == 0.6
    p = derive_constants(CompactRectSpec.point(0.75))
    assert p.abs_K == 0 and p.tau0 == 0 and p.sigma0 == 0.625


def test_rect_validation():
    for bad in [(0.5, 0.8, 0, 1), (0.7, 1.0, 0, 1), (0.8, 0.7, 0, 1), (0.7, 0.8, 1, 0)]:
        with pytest.raises(DomainError):
            CompactRectSpec(*bad)
    with pytest.raises(DomainError):
        CompactRectSpec(0.7, 0.8, 0, 1, M=32)


def test_k_grid_counts():
    b, inner = k_grid(CompactRectSpec(0.7, 0.8, -0.05, 0.05, 256))
    assert len(b) == 256 and len(inner) == 256
    assert np.all((b.real >= 0.7) & (b.real <= 0.8) & (abs(b.imag) <= 0.05 + 1e-15))


def test_exclusion_examples():
    assert exclusion_set(ZeroCatalog.empty(), 0.6, 0.0, 1.0, (100, 200)).measure == 100
    cat = ZeroCatalog.synthetic([(0.7, 150.0)])
    e = exclusion_set(cat, 0.6, 0.0, 10.0, (100, 200))
    assert e.to_list() == [[100, 140], [160, 200]] and e.measure == 80
    assert exclusion_set(cat, 0.8, 0.0, 10.0, (100, 200)).measure == 100


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.floats(0.51, 0.99), st.floats(1, 300)), max_size=8, unique_by=lambda r: r[1]),
       st.floats(0.1, 5), st.floats(0.1, 5), st.floats(0.5, 0.9))
def test_exclusion_monotone(records, d1, d2, s0):
    cat = ZeroCatalog.synthetic(records)
    lo, hi = sorted((d1, d2))
    a = exclusion_set(cat, s0, 0.0, lo, (50, 250)).measure
    b = exclusion_set(cat, s0, 0.0, hi, (50, 250)).measure
    assert b <= a + 1e-9
    assert exclusion_set(cat, s0 - 0.05, 0.0, lo, (50, 250)).measure <= a + 1e-9


def test_shift_set_nesting(catalog):
    K = CompactRectSpec(0.7, 0.8, -0.05, 0.05)
    I = valid_shifts(catalog, K, 300)
    X = script_X_set(catalog, K, 300, 5.0)
    assert X.issubset(I) and I.issubset(I.interval(300, 600))
    # under RH no zero has beta > sigma0 > 1/2, so only the window around -tau0 could be removed
    assert I.measure == 300


def test_ell_set_examples():
    e = ell_set(ZeroCatalog.empty(), 0.6, 10, 1000)
    assert math.isclose(e.measure, 26)
    cat = ZeroCatalog.synthetic([(0.9, 1500.0)])
    assert math.isclose(ell_set(cat, 0.6, 10, 1000).measure, 52)


def test_height_check():
    cat = parse_zeros("14.134725141734693\n21.022039638771555\n", assume_rh=True)
    assert cat.height_bound == pytest.approx(21.022039638771555)
    short = ZeroCatalog(cat.betas, cat.gammas, "x", 30.0, False)
    with pytest.raises(CatalogTooShort):
        exclusion_set(short, 0.6, 0.0, 1.0, (100, 200))


def test_parse():
    cat = parse_zeros("# header\n14.134725141734693\n\n21.022039638771555\n")
    assert cat.records[0] == (0.5, 14.134725141734693)
    empty = parse_zeros("")
    assert len(empty) == 0 and empty.height_bound == 0
    with pytest.raises(ParseError) as exc:
        parse_zeros("14.1\nabc\n")
    assert exc.value.lineno == 2
    with pytest.raises(MonotonicityError):
        parse_zeros("21.0\n14.1\n")
    two = parse_zeros("0.7, 40\n0.5 50\n", assume_rh=False)
    assert two.records == [(0.7, 40.0), (0.5, 50.0)]
    with pytest.raises(ParseError):
        parse_zeros("40\n", assume_rh=False)


def test_cut_lookup():
    cat = ZeroCatalog.synthetic([(0.8, 50.0)])
    assert cat.cut_at(50.0, 0.7) == (0.8, 50.0)
    assert cat.cut_at(-50.0, 0.7) == (0.8, -50.0)
    assert cat.cut_at(50.0, 0.85) is None
    assert cat.cut_mask(np.array([50.0, 50.0, 49.0]), np.array([0.7, 0.9, 0.7])).tolist() == [True, False, False]
