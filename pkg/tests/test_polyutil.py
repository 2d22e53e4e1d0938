from fractions import Fraction

from osckit import polyutil as P
from osckit.cnum import CNum


def F(*xs):
    return [Fraction(x) for x in xs]


def test_divmod_and_gcd():
    p = P.mul(F(1, 1), F(-2, 1))  # (x + 1)(x - 2)
    q, r = P.divmod_poly(p, F(1, 1))
    assert q == F(-2, 1) and P.trim(r) == []
    assert P.monic(P.gcd(p, P.mul(F(1, 1), F(3, 1)))) == F(1, 1)


def test_squarefree():
    p = P.mul(P.mul(F(-1, 1), F(-1, 1)), F(2, 1))
    facs = P.squarefree_factors(p)
    assert sorted((P.degree(f), m) for f, m in facs) == [(1, 1), (1, 2)]


def test_rational_roots():
    p = P.mul(F(-1, 2), P.mul(F(5, 3), F(1, 0, 1)))
    assert sorted(P.rational_roots(p)) == [Fraction(-5, 3), Fraction(1, 2)]


def test_numeric_roots_polished():
    roots = P.numeric_roots([CNum(-6), CNum(0), CNum(1)])
    for r in roots:
        assert abs(r * r - 6) < 1e-30
