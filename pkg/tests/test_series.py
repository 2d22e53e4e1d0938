from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from osckit.cnum import CNum
from osckit.series import PowerSeries

from conftest import gaussian

series = st.lists(gaussian, min_size=1, max_size=9).map(lambda c: PowerSeries(c, 8))


def test_exp_of_x():
    e = PowerSeries.x(6).exp()
    fact = 1
    for i in range(7):
        assert e[i] == CNum(Fraction(1, fact))
        fact *= i + 1


@settings(max_examples=200)
@given(series)
def test_log_exp_roundtrip(r):
    s = PowerSeries.one(8) + r.shift(1).truncate(8)
    assert s.log().exp() == s
    z = r.shift(1).truncate(8)
    assert z.exp().log() == z


@settings(max_examples=200)
@given(series, series, series)
def test_series_ring_laws(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a * b).differentiate() == a.differentiate() * b.truncate(7) + a.truncate(7) * b.differentiate()


@settings(max_examples=100)
@given(series)
def test_inverse(a):
    if a[0].is_zero():
        with pytest.raises(ZeroDivisionError):
            a.inverse()
    else:
        assert a * a.inverse() == PowerSeries.one(8)


def test_exp_needs_zero_constant():
    with pytest.raises(ValueError):
        PowerSeries([1, 1]).exp()


def test_truncation_bookkeeping():
    a = PowerSeries([1, 2, 3])
    assert a.differentiate().N == 1
    assert a.shift(2).N == 4
    with pytest.raises(IndexError):
        a[3]
    with pytest.raises(ValueError):
        a.truncate(5)


def test_json_roundtrip():
    a = PowerSeries([CNum(1, 2), Fraction(-3, 7)])
    assert PowerSeries.from_json(a.to_json()) == a
