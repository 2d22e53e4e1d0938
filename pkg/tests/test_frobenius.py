import random
from fractions import Fraction

import mpmath
import pytest

from osckit.builder import build_pair_cor45
from osckit.cnum import CNum
from osckit.frobenius import (
    MatchError,
    TruncationError,
    frobenius_solve,
    general_solution_eval,
    indicial,
    lommel_map,
    series_match,
    substitution_residual,
)
from osckit.solution import EqSpec


def test_lommel_l2():
    lm = lommel_map(EqSpec(2, 1, 3, Fraction(1, 2)))
    assert lm.h == (CNum(Fraction(-1, 4)), CNum(-3), CNum(-1))
    assert all(lm.constraints().values())
    assert (lm.d1, lm.d2, lm.d3) == (CNum(1), CNum(3), CNum(Fraction(1, 2)))


def test_lommel_constant_term():
    for b3 in (0, 1, Fraction(7, 3), CNum(1, 1)):
        lm = lommel_map(EqSpec(4, 3, 2, b3))
        assert lm.h[0] == CNum(Fraction(1, 4)) - CNum.coerce(b3)


def test_indicial_values():
    assert indicial(CNum(Fraction(-3, 4))) == (CNum(Fraction(3, 2)), CNum(Fraction(-1, 2)))
    assert indicial(CNum(Fraction(1, 4))) == (CNum(Fraction(1, 2)), CNum(Fraction(1, 2)))


def test_indicial_identities_random():
    rng = random.Random(3)
    for _ in range(50):
        h0 = CNum(Fraction(rng.randint(-40, 40), rng.randint(1, 9)), Fraction(rng.randint(-9, 9), rng.randint(1, 5)))
        r1, r2 = indicial(h0)
        assert abs((r1 + r2 - 1).to_mpc()) < 1e-30
        assert abs((r1 * r2 - h0).to_mpc()) < 1e-30
        assert r1.to_mpc().real >= r2.to_mpc().real


def test_unit_pair_has_no_logarithm():
    fp = frobenius_solve(lommel_map(EqSpec(2, 1, 1, 1)).h, 24)
    assert fp.case == "integer-difference" and fp.n0 == 2
    assert fp.d == 0 and fp.obstruction == CNum(0)
    assert fp.u2[0] == CNum(1) and fp.u2[1] == CNum(-1) and fp.u2[2] == CNum(0)


def test_equal_roots_force_logarithm():
    fp = frobenius_solve([CNum(Fraction(1, 4)), CNum(1)], 10)
    assert fp.case == "equal" and fp.d == 1
    r1, r2 = substitution_residual(fp)
    assert r1.order() is None and r2.order() is None


def test_nonvanishing_obstruction_gives_logarithm():
    # rho = 3/2, -1/2 and h1 != 0 at index 2 through b1
    fp = frobenius_solve([CNum(Fraction(-3, 4)), CNum(1), CNum(1)], 12)
    assert fp.d == 1 and fp.u2[2] == CNum(0)
    r1, r2 = substitution_residual(fp)
    assert r1.order() is None and r2.order() is None


def _random_problem(rng):
    """x^2 u'' + h u = 0 with rho1 - rho2 = 2 nu, nu rational or Gaussian."""
    nu = CNum(Fraction(rng.randint(-6, 6), rng.choice((1, 2, 3, 4))),
              Fraction(rng.randint(-3, 3), rng.choice((1, 2))) if rng.random() < 0.3 else 0)
    h0 = CNum(Fraction(1, 4)) - nu * nu
    L = rng.randint(1, 4)
    h = [h0] + [CNum(Fraction(rng.randint(-5, 5), rng.randint(1, 4)), Fraction(rng.randint(-2, 2), rng.randint(1, 3)))
                for _ in range(L)]
    return h


def test_substitution_residual_random_problems():
    rng = random.Random(2024)
    cases = {"non-integer": 0, "integer-difference": 0, "equal": 0}
    for _ in range(100):
        h = _random_problem(rng)
        N = 14
        fp = frobenius_solve(h, N)
        cases[fp.case] += 1
        r1, r2 = substitution_residual(fp)
        for r in (r1, r2):
            assert all(c.is_zero() for c in r.coeffs[: N - 1])
        assert fp.u1[0] == CNum(1)
        if fp.d == 0:
            assert not fp.u2[0].is_zero()
    assert all(v > 0 for v in cases.values()), cases


def test_truncation_below_gap_rejected():
    with pytest.raises(ValueError):
        frobenius_solve([CNum(Fraction(-35, 4)), CNum(1)], 3)


def test_series_match_unit_pair():
    _, f1, f2 = build_pair_cor45(1, 0, 1)
    fp = frobenius_solve(lommel_map(f1.spec).h, 24)
    rep = series_match((f1, f2), fp, 12)
    assert rep.discrepancy == 0
    D1, D2, D3, D4 = rep.D
    assert D2 == D4 == CNum(1)
    assert rep.w_order == 2
    assert rep.w[0].is_zero() and rep.w[1].is_zero() and not rep.w[2].is_zero()


def test_series_match_rejects_dependent_pair():
    _, f1, _ = build_pair_cor45(2, 0, 1)
    fp = frobenius_solve(lommel_map(f1.spec).h, 24)
    with pytest.raises(MatchError):
        series_match((f1, f1), fp, 12)


def test_general_solution_eval_reproduces_zero_free_member():
    _, f1, f2 = build_pair_cor45(1, 0, 1)
    fp = frobenius_solve(lommel_map(f1.spec).h, 24)
    D = series_match((f1, f2), fp, 12).D
    for y in (-2, -1, 0, 1, 2):
        z = mpmath.mpc(-3, y)
        exact = f2.f(z)
        assert abs(general_solution_eval(fp, D[2], D[3], z) - exact) <= 1e-10 * abs(exact)


def test_general_solution_eval_linear_and_zero():
    fp = frobenius_solve(lommel_map(EqSpec(2, 1, 1, 1)).h, 24)
    z = mpmath.mpc(-2.5, 0.3)
    assert general_solution_eval(fp, 0, 0, z) == 0
    E1, E2 = CNum(2, -1), CNum(Fraction(1, 3))
    lhs = general_solution_eval(fp, E1, E2, z)
    rhs = E1.to_mpc() * general_solution_eval(fp, 1, 0, z) + E2.to_mpc() * general_solution_eval(fp, 0, 1, z)
    assert abs(lhs - rhs) < 1e-25


def test_general_solution_eval_refuses_large_argument():
    fp = frobenius_solve(lommel_map(EqSpec(2, 1, 1, 1)).h, 12)
    with pytest.raises(TruncationError):
        general_solution_eval(fp, 1, 0, 2.0)


def test_frobenius_json_shape():
    fp = frobenius_solve(lommel_map(EqSpec(2, 1, 1, 1)).h, 6)
    out = fp.to_json()
    assert {"rho1", "rho2", "d", "u1", "u2", "N"} <= set(out)
    assert out["N"] == 6 and len(out["u1"]) == 7
