from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from f2derived.delta import excess, is_admissible
from f2derived.loopspace import (
    DLGenerator,
    E2Generator,
    HilbertSeries,
    collapse_check,
    dl_degree,
    dl_degree_j_form,
    dl_series,
    e2_series,
    enum_dl,
    enum_e2,
    forward_map,
    from_r_coordinates,
    inverse_map,
    lz_degree,
    r_coordinates,
    split_index,
)


def test_generator_rendering():
    assert str(E2Generator(2, (0, 1), (3, 1), 1)) == "d3 d1 [0,1](v)"
    assert str(E2Generator(1, (0,), (), 2)) == "[0](v)"
    assert str(DLGenerator((0, 1))) == "{0,1}(v)"


def test_generator_validation():
    with pytest.raises(ValueError):
        E2Generator(2, (0,))
    with pytest.raises(ValueError):
        E2Generator(1, (0,), (3, 1))      # excess 2 > s
    with pytest.raises(ValueError):
        E2Generator(2, (0, 0), (2, 2))    # not admissible
    with pytest.raises(ValueError):
        DLGenerator(())


def test_degree_examples():
    # [0](v) on a degree-k class sits in internal degree 2k + 1, filtration -1
    assert lz_degree(1, (0,), 1) == (-1, 3, 2)
    assert lz_degree(1, (1,), 3) == (-1, 8, 7)
    assert DLGenerator((0,), 1).degree == 2 and DLGenerator((1,), 1).degree == 3
    g = E2Generator(1, (0,), (1,), 1)
    assert g.degree == (-2, 6, 4)


def test_degree_forms_agree():
    for k in range(1, 5):
        for sigma in range(1, 5):
            for b in product(range(4), repeat=sigma):
                assert dl_degree(b, k) == dl_degree_j_form(b, k)


def test_r_coordinates_round_trip():
    for I in [(1,), (4, 2), (5, 2, 1), (8, 4, 2, 1)]:
        r = r_coordinates(I)
        assert from_r_coordinates(r) == I
        assert sum(r) == excess(I)


def test_map_examples():
    assert forward_map(E2Generator(1, (0,), (), 1)) == DLGenerator((0,), 1)
    assert forward_map(E2Generator(2, (0, 0), (), 1)) == DLGenerator((1, 0), 1)
    g = E2Generator(1, (0,), (1,), 1)
    assert forward_map(g) == DLGenerator((0, 0), 1)
    assert inverse_map(DLGenerator((0, 0), 1)) == g


def test_split_index_total_on_small_tuples():
    for sigma in range(1, 5):
        for b in product(range(4), repeat=sigma):
            L = split_index(b)
            assert 0 <= L < sigma


def _brute_e2(k, D):
    out = set()
    for s in range(1, 5):
        for a in product(range(D + 1), repeat=s):
            if lz_degree(s, a, k)[2] > D:
                continue
            for length in range(0, 4):
                for I in product(range(1, D + 1), repeat=length):
                    if is_admissible(I) and excess(I) <= s:
                        g = E2Generator(s, a, I, k)
                        if g.total <= D:
                            out.add(g)
    return out


def test_enum_e2_complete_small():
    for k, D in [(1, 10), (2, 12), (3, 12)]:
        listed = {g for g in enum_e2(k, D) if g != "v"}
        assert listed == _brute_e2(k, D)
        assert len(listed) == len(enum_e2(k, D)) - 1


def test_enum_dl_complete_small():
    for k, D in [(1, 12), (2, 14)]:
        listed = {g for g in enum_dl(k, D) if g != "v"}
        brute = {DLGenerator(b, k) for sigma in range(1, 5) for b in product(range(D + 1), repeat=sigma)
                 if dl_degree(b, k) <= D}
        assert listed == brute


def test_series_identity():
    # prod_m (1 + x^(2^m d)) = 1 / (1 - x^d)
    D = 40
    for d in (1, 2, 3):
        lhs = HilbertSeries.one(D)
        m = 0
        while 2 ** m * d <= D:
            lhs = lhs.times_exterior(2 ** m * d)
            m += 1
        assert lhs.coeffs == HilbertSeries.one(D).times_polynomial(d).coeffs


def test_collapse_examples():
    for k in (1, 2, 3):
        assert collapse_check(k, 30).equal
    small = collapse_check(5, 4)
    assert small.equal and small.dl_series.coeffs == [1, 0, 0, 0, 0]
    with pytest.raises(ValueError):
        collapse_check([], 10)


def test_wedge_is_product():
    D = 24
    both = collapse_check([1, 2], D)
    assert both.equal
    assert both.dl_series.coeffs == (dl_series(1, D) * dl_series(2, D)).coeffs
    assert both.e2_series.coeffs == (e2_series(1, D) * e2_series(2, D)).coeffs


@st.composite
def e2_generators(draw):
    k = draw(st.integers(1, 4))
    s = draw(st.integers(1, 4))
    a = tuple(draw(st.lists(st.integers(0, 5), min_size=s, max_size=s)))
    length = draw(st.integers(0, 3))
    r = draw(st.lists(st.integers(0, s), min_size=length, max_size=length))
    if r:
        r[-1] = max(r[-1], 1)
    I = from_r_coordinates(r)
    if excess(I) > s:
        I = ()
    return E2Generator(s, a, I, k)


@settings(max_examples=400, deadline=None)
@given(e2_generators())
def test_bijection_round_trip_and_degree(g):
    d = forward_map(g)
    assert inverse_map(d) == g
    assert d.degree == g.total


@settings(max_examples=400, deadline=None)
@given(st.integers(1, 4), st.lists(st.integers(0, 6), min_size=1, max_size=5))
def test_inverse_then_forward(k, b):
    d = DLGenerator(tuple(b), k)
    assert forward_map(inverse_map(d)) == d
