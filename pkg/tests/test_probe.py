import time

import pytest
import sympy as sp

from osckit.probe import (
    B2,
    C1,
    T,
    ProbeError,
    general_probe,
    normalize_poly,
    normalized_dedicated,
    probe_branch,
    residual_coefficients,
)


@pytest.mark.parametrize("l,s,k_values", [(2, 1, range(0, 4)), (4, 1, range(1, 4)), (4, 3, range(0, 4))])
def test_probe_matches_dedicated_builders(l, s, k_values):
    for k in k_values:
        for c0 in (1, -1):
            r = probe_branch(l, s, k, c0)
            assert r.normalized() == normalized_dedicated(l, s, k, c0), (l, s, k, c0)


def test_l4s1_k0_is_inconsistent():
    # a constant kappa cannot close the l = 4, s = 1 recursion
    r = probe_branch(4, 1, 0, 1)
    assert sp.Integer(1) in r.normalized()
    assert not r.verified


def test_l2_branch_is_a_family():
    r = probe_branch(2, 1, 2, 1)
    assert r.family
    assert r.normalized() == frozenset({sp.expand(T - B2 + 5)})


def test_probe_verified_roots_for_l4s3():
    r = probe_branch(4, 3, 1, 1)
    assert len(r.verified) == 4
    assert all(c.verified for c in r.candidates)


def test_l6_candidates_are_gated():
    t0 = time.perf_counter()
    results = general_probe(6, 1, 3)
    assert time.perf_counter() - t0 < 60
    n_candidates = 0
    for r in results:
        for c in r.candidates:
            n_candidates += 1
            assert c.verified == (c.residual_norm < 1e-25)
            assert c.verified or c.solution is None
    assert n_candidates > 0


def test_residual_constant_term_vanishes():
    E, _ = residual_coefficients(4, 3, 2, 1)
    assert sp.expand(E[0]) == 0


@pytest.mark.parametrize("l,s,k", [(3, 1, 1), (4, 2, 1), (4, 5, 1), (4, 1, -1)])
def test_probe_rejects_bad_input(l, s, k):
    with pytest.raises(ProbeError):
        general_probe(l, s, k)


def test_normalisation_drops_side_factors():
    assert normalize_poly(B2 * (B2 ** 2 - 6) * 3) == B2 ** 2 - 6
    assert normalize_poly(C1 ** 2 * (2 * T + 4) ** 2) == T + 2
    assert normalize_poly(sp.Integer(0)) is None
    assert normalize_poly(sp.Integer(7)) == 1


def test_probe_json_is_serialisable():
    import json

    out = [r.to_json() for r in general_probe(4, 3, 1)]
    assert json.loads(json.dumps(out)) == out
