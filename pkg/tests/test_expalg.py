from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from osckit.cnum import CNum
from osckit.expalg import ExpPoly, laurent_roots

from conftest import exppolys

points = st.complex_numbers(min_magnitude=0, max_magnitude=1.5, allow_nan=False, allow_infinity=False)


# -- examples -------------------------------------------------------------

def test_product_of_binomials():
    a = ExpPoly({0: 1, 1: 1})
    assert a * a == ExpPoly({0: 1, 1: 2, 2: 1})


def test_derivative_scales_by_exponent():
    a = ExpPoly({0: 3, 2: 1, -1: 5})
    assert a.differentiate() == ExpPoly({2: 2, -1: -5})


def test_half_integer_exponents():
    a = ExpPoly({1: 1}, den=2)
    assert a * a == ExpPoly({1: 1})
    assert a.differentiate() == ExpPoly({1: Fraction(1, 2)}, den=2)


def test_canonical_form_drops_zeros():
    a = ExpPoly({0: 1, 1: 0, 2: CNum(0)})
    assert a.exponents() == [0]
    assert ExpPoly({2: 1, 4: 1}, den=2).den == 1


def test_zero_test_exact_and_float():
    assert ExpPoly().is_zero()
    assert not ExpPoly({0: Fraction(1, 10**30)}).is_zero()
    tiny = CNum.from_mpc(mpmath.mpc(1e-30, 0))
    assert ExpPoly({0: tiny}).is_zero()


def test_roots_of_one_minus_two_exp():
    roots = laurent_roots(ExpPoly({0: 1, 1: -2}))
    assert len(roots) == 1
    r, m = roots[0]
    assert m == 1 and abs(r - 0.5) < 1e-30


def test_double_root_multiplicity():
    sq = ExpPoly({0: 1, 1: -1}) ** 2
    ((r, m),) = laurent_roots(sq)
    assert m == 2 and abs(r - 1) < 1e-25


def test_roots_of_zero_rejected():
    with pytest.raises(ValueError):
        laurent_roots(ExpPoly())


def test_overflow_guard():
    with pytest.raises(OverflowError):
        ExpPoly({1: 1}).evaluate(2e6)


def test_json_roundtrip():
    a = ExpPoly({-1: CNum(1, 2), 3: Fraction(-7, 3)}, den=2)
    assert ExpPoly.from_json(a.to_json()) == a


# -- ring laws, exact, 1000 random cases each --------------------------------

@settings(max_examples=1000)
@given(exppolys(), exppolys(), exppolys())
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()
    assert a * ExpPoly.constant(1) == a


@settings(max_examples=1000)
@given(exppolys(), exppolys())
def test_leibniz_rule(a, b):
    assert (a * b).differentiate() == a.differentiate() * b + a * b.differentiate()


@settings(max_examples=1000)
@given(exppolys(), exppolys(), points)
def test_evaluation_is_a_ring_homomorphism(a, b, z):
    z = mpmath.mpc(z)
    for lhs, rhs in (((a * b).evaluate(z), a.evaluate(z) * b.evaluate(z)),
                     ((a + b).evaluate(z), a.evaluate(z) + b.evaluate(z))):
        assert abs(lhs - rhs) <= 1e-25 * (1 + abs(rhs))


@settings(max_examples=200)
@given(exppolys(), points)
def test_derivative_matches_finite_differences(a, z):
    z = mpmath.mpc(z)
    h = mpmath.mpf(10) ** -12
    fd = (a.evaluate(z + h) - a.evaluate(z - h)) / (2 * h)
    exact = a.differentiate().evaluate(z)
    assert abs(fd - exact) <= 1e-15 * (1 + abs(exact))


@settings(max_examples=200)
@given(exppolys(), points)
def test_vectorised_evaluation_agrees(a, z):
    v = a.evaluate_array(np.array([z]))[0]
    assert abs(v - complex(a.evaluate(z))) <= 1e-9 * (1 + abs(v))
