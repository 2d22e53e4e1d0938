import math

import numpy as np
import pytest

from osckit.builder import build_l2, build_l4_s1, build_l4_s3, build_pair_cor45
from osckit.cnum import CNum
from osckit.expalg import ExpPoly
from osckit.oscillation import (
    ContourError,
    ZeroLattice,
    argument_count,
    count_table,
    count_zeros,
    counts_to_csv,
    delta_sectors,
    lambda_estimate,
    ray_from_solution,
    ray_integrate,
    relative_error,
    zeros_of,
)
from osckit.solution import EqSpec, SolutionForm

R_VALUES = np.logspace(0, 4, 40)


def _with_kappa(kappa: ExpPoly) -> SolutionForm:
    _, f1, _ = build_pair_cor45(1, 0, 1)
    return SolutionForm(f1.spec, kappa, f1.g, 0, f1.c0, f1.c)


def test_single_root_lattice():
    _, f1, _ = build_pair_cor45(1, 0, 1)
    lat = zeros_of(f1)
    ((base, mult),) = lat.entries
    assert mult == 1 and base == pytest.approx(-math.log(2))
    assert lat.period == pytest.approx(2 * math.pi)


def test_constant_kappa_lattice_is_empty():
    _, _, f2 = build_pair_cor45(1, 0, 1)
    lat = zeros_of(f2)
    assert lat.empty and count_zeros(lat, 50) == 0 and lambda_estimate(lat, R_VALUES) == 0


def test_double_root_lattice():
    lat = zeros_of(_with_kappa(ExpPoly({0: 1, 1: -1}) ** 2))
    ((base, mult),) = lat.entries
    assert mult == 2 and abs(base) < 1e-12


@pytest.mark.parametrize("r,n", [(100, 31), (1, 1)])
def test_counts(r, n):
    lat = ZeroLattice(((complex(-math.log(2), 0), 1),))
    assert count_zeros(lat, r) == n


def test_count_is_monotone_and_jumps_by_multiplicity():
    lat = ZeroLattice(((complex(0.3, 1.0), 2), (complex(-1.0, -2.0), 1)))
    rs = np.linspace(0.01, 40, 2000)
    counts = [count_zeros(lat, r) for r in rs]
    assert all(b >= a for a, b in zip(counts, counts[1:]))
    assert set(np.diff(counts)) <= {0, 1, 2, 3}


def test_boundary_radius_is_perturbed():
    lat = ZeroLattice(((complex(1.0, 0), 1),))
    assert count_zeros(lat, 1.0) == 1


def test_lambda_estimates():
    one = ZeroLattice(((complex(-math.log(2), 0), 1),))
    two = ZeroLattice(((complex(-math.log(2), 0), 1), (complex(0.5, 1.0), 1)))
    assert abs(lambda_estimate(one, R_VALUES) - 1) <= 0.05
    assert abs(lambda_estimate(two, R_VALUES) - 1) <= 0.05


def test_lambda_needs_four_increasing_radii():
    with pytest.raises(ValueError):
        lambda_estimate(ZeroLattice(()), [1, 2, 3])
    with pytest.raises(ValueError):
        lambda_estimate(ZeroLattice(()), [1, 3, 2, 4])


def _regression_solutions():
    sols = build_l2(1, 1) + build_l2(3, 0)
    for k1, k2 in ((1, 0), (3, 1), (4, 2)):
        sols.extend(build_pair_cor45(k1, k2, 1)[1:])
    sols.extend(build_l4_s1(2, 1)[1])
    sols.extend(build_l4_s3(1)[1][:4])
    return sols


def test_argument_principle_agrees_with_lattice():
    for sol in _regression_solutions():
        lat = zeros_of(sol)
        for r in (5, 10, 20):
            try:
                n = argument_count(sol, r)
            except ContourError:
                continue
            assert n == count_zeros(lat, r)


def test_lambda_of_builder_outputs():
    for sol in _regression_solutions():
        lat = zeros_of(sol)
        lam = lambda_estimate(lat, R_VALUES)
        if sol.kappa.is_constant():
            assert lam == 0
        else:
            assert 0.9 <= lam <= 1.1


def test_argument_count_rejects_zero_on_contour():
    _, f1, _ = build_pair_cor45(1, 0, 1)
    with pytest.raises(ContourError):
        argument_count(f1, math.log(2))


def test_sectors_for_z():
    sd = delta_sectors(1, 0, 1)
    assert sd.theta_list == pytest.approx((-math.pi / 2, math.pi / 2))
    assert sd.signs == (1, -1)
    assert sd.delta(0.0) == pytest.approx(1.0)


def test_sectors_for_iz2():
    sd = delta_sectors(0, 1, 2)
    assert sd.delta(0.3) == pytest.approx(-math.sin(0.6))
    assert len(sd.theta_list) == 4


@pytest.mark.parametrize("a,b,k", [(1, 0, 1), (0, 1, 2), (2, -3, 3), (-1, 0.5, 5)])
def test_sector_structure(a, b, k):
    sd = delta_sectors(a, b, k)
    assert len(sd.signs) == 2 * k
    assert all(x == -y for x, y in zip(sd.signs, sd.signs[1:]))
    assert sd.signs[0] == 1
    for t in sd.theta_list:
        assert abs(sd.delta(t)) < 1e-12


def test_sector_rejects_bad_input():
    with pytest.raises(ValueError):
        delta_sectors(0, 0, 1)
    with pytest.raises(ValueError):
        delta_sectors(1, 0, 1, theta1=0.2)


def test_ray_constant_coefficient():
    for theta in (0.0, 1.0, math.pi):
        u = complex(math.cos(theta), math.sin(theta))
        out = ray_integrate(None, theta, 5, 1, 1, rtol=1e-12, coefficient=lambda z: np.ones_like(z))
        exact = np.exp(out.r * u)
        assert np.max(np.abs(out.f - exact) / np.abs(exact)) < 1e-10


def test_ray_decaying_direction_matches_closed_form():
    (sol,) = [s for s in build_l2(3, 0) if s.k == 1]
    out = ray_from_solution(sol, math.pi, 10)
    assert relative_error(sol, out) < 1e-8


def test_ray_growing_direction_needs_high_precision():
    _, _, f2 = build_pair_cor45(1, 0, 1)
    out = ray_from_solution(f2, 0.0, 3, method="taylor", n_samples=13)
    assert relative_error(f2, out) < 1e-6


def test_ray_matches_builder_outputs_where_moderate():
    for sol in _regression_solutions()[:6]:
        out = ray_from_solution(sol, math.pi, 6)
        assert relative_error(sol, out) < 1e-6


def test_csv_exports():
    lat = ZeroLattice(((complex(-math.log(2), 0), 1),))
    text = counts_to_csv(count_table(lat, [1, 100]))
    assert text.splitlines() == ["r,n", "1.0,1", "100.0,31"]
    (sol,) = [s for s in build_l2(3, 0) if s.k == 1]
    csv_text = ray_from_solution(sol, math.pi, 1, n_samples=3).to_csv()
    assert csv_text.splitlines()[0] == "r,abs_f,re_f,im_f" and len(csv_text.splitlines()) == 4
