"""Constructors for zero-scarce solutions of f'' - (e^{lz} + b2 e^{sz} + b3) f = 0.

Every solution has the shape f = kappa(e^z) exp(h) with kappa a polynomial
in e^z (nonzero constant and leading coefficients) and h' a polynomial in
e^z plus a constant c with c^2 = b3.  The coefficient recursions are
threaded exactly; closure polynomials (the condition forcing the recursion
to terminate) always carry exact rational coefficients.  Emitted solutions
are normalised to kappa(0) = 1 and are residual-verified before return.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial

from . import polyutil as P
from .cnum import CNum, csqrt, sqrt_branches
from .expalg import FLOAT_ZERO_TOL, ExpPoly
from .solution import EqSpec, SolutionForm
from .verify import verify

log = logging.getLogger(__name__)

GENS = ("t", "b2", "c1")
ODD_L_NOTE = "l must be even for lambda(f) < infinity (no zero-scarce solution exists for odd l)"


class BuilderError(ValueError):
    pass


class OddDegreeError(BuilderError):
    pass


# ---------------------------------------------------------------------------
# sparse polynomials in (t, b2, c1), used only to describe closure systems


def sparse_from_univariate(coeffs, var: str) -> dict:
    idx = GENS.index(var)
    out = {}
    for i, a in enumerate(coeffs):
        if a != 0:
            e = [0, 0, 0]
            e[idx] = i
            out[tuple(e)] = Fraction(a)
    return out


def sparse_to_str(poly: dict) -> str:
    if not poly:
        return "0"
    parts = []
    for exps, a in sorted(poly.items(), reverse=True):
        mono = "*".join(f"{g}^{e}" if e > 1 else g for g, e in zip(GENS, exps) if e)
        parts.append(f"({a})*{mono}" if mono else f"({a})")
    return " + ".join(parts)


@dataclass
class ClosureSystem:
    """Polynomial conditions a recursion imposes for it to terminate.

    ``coeffs`` is the univariate closure polynomial in ``unknown``
    (ascending, exact, monic); ``relations`` are the other equations of the
    branch as sparse polynomials over (t, b2, c1) with t = 2c.
    """

    case: str
    k: int
    unknown: str
    coeffs: list[Fraction]
    c0: int | None = None
    relations: list[dict] = field(default_factory=list)
    roots: list[CNum] = field(default_factory=list)
    degenerate: list[str] = field(default_factory=list)

    def polynomials(self) -> list[dict]:
        polys = list(self.relations)
        if P.degree(self.coeffs) >= 0:
            polys.append(sparse_from_univariate(self.coeffs, self.unknown))
        return polys

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "k": self.k,
            "c0": self.c0,
            "unknown": self.unknown,
            "coeffs": [f"{a.numerator}/{a.denominator}" for a in self.coeffs],
            "roots": [r.to_json() for r in self.roots],
            "relations": [sparse_to_str(r) for r in self.relations],
            "degenerate": list(self.degenerate),
        }


# ---------------------------------------------------------------------------
# helpers


def _frac_poly_roots(coeffs: list[Fraction]) -> list[CNum]:
    """Distinct roots: exact rationals first (ascending), then the rest numerically."""
    out = [CNum(r) for r in P.rational_roots(coeffs)]
    rest = list(coeffs)
    for r in out:
        while P.degree(rest) >= 1 and P.evaluate(rest, r.real) == 0:
            rest, _ = P.divmod_poly(rest, [-r.real, 1])
    for f, _mult in P.squarefree_factors(rest):
        out.extend(CNum.from_mpc(z) for z in P.numeric_roots(f))
    return out


def _kappa(coeffs: list[CNum]) -> ExpPoly:
    a0 = coeffs[0]
    return ExpPoly.from_coeffs([a / a0 for a in coeffs])


def _finish(sol: SolutionForm) -> SolutionForm | None:
    report = verify(sol)
    if not report.is_solution:
        log.warning("discarding unverified candidate %s: %s", sol.branch, report.notes)
        return None
    return SolutionForm(**{**sol.__dict__, "verified": True})


def _nonzero(x: CNum) -> bool:
    return not x.is_zero(None if x.exact else FLOAT_ZERO_TOL)


# ---------------------------------------------------------------------------
# l = 2, s = 1


def l2_kappa(k: int, c, c0) -> list[CNum] | None:
    """Downward recursion 2 c0 (k+1-i) a_{i-1} = (2ic + i^2) a_i from a_k = 1.

    Returns a_0..a_k rescaled to a_0 = 1, or None if a_0 vanishes.
    """
    c, c0 = CNum.coerce(c), CNum.coerce(c0)
    a = [CNum(0)] * (k + 1)
    a[k] = CNum(1)
    for i in range(k, 0, -1):
        a[i - 1] = (c * (2 * i) + i * i) * a[i] / (c0 * (2 * (k + 1 - i)))
    if not _nonzero(a[0]):
        return None
    return [x / a[0] for x in a]


def _l2_solution(spec: EqSpec, k: int, c, c0, label: str) -> SolutionForm | None:
    coeffs = l2_kappa(k, c, c0)
    if coeffs is None:
        return None
    g = ExpPoly({1: c0, 0: c})
    sol = SolutionForm(spec, _kappa(coeffs), g, k, CNum.coerce(c0), CNum.coerce(c), {"case": "l2", "branch": label})
    return _finish(sol)


def build_l2(b2, b3) -> list[SolutionForm]:
    """All zero-scarce solutions for l = 2, s = 1 (one per admissible branch)."""
    spec = EqSpec(2, 1, b2, b3)
    out = []
    for c0 in (1, -1):
        for sign, c in zip("+-", sqrt_branches(spec.b3)):
            kval = (spec.b2 * c0 - 1) / 2 - c
            k = kval.as_integer()
            if k is None or k < 0:
                continue
            sol = _l2_solution(spec, k, c, c0, f"c0={c0:+d},c={sign}sqrt(b3)")
            if sol is not None:
                out.append(sol)
    return out


def closure_l2(k: int, c0: int) -> ClosureSystem:
    """The l = 2 branch condition b2 = c0 (2c + 2k + 1) as a system in (t, b2)."""
    rel = {(0, 1, 0): Fraction(1), (1, 0, 0): Fraction(-c0)}
    if 2 * k + 1:
        rel[(0, 0, 0)] = Fraction(-c0 * (2 * k + 1))
    return ClosureSystem("l2", k, "b2", [], c0=c0, relations=[rel])


# ---------------------------------------------------------------------------
# l = 4, s = 1


@lru_cache(maxsize=None)
def l4s1_symbolic(k: int, c0: int) -> tuple[tuple[tuple[Fraction, ...], ...], tuple[Fraction, ...]]:
    """a_0..a_k as exact polynomials in b2 and the raw closure 2c0 a_{k-1} + b2 a_k."""
    if k < 1:
        raise BuilderError("the l=4, s=1 case needs k >= 1")
    c = -(k + 1)
    a: dict[int, list] = {-2: [], -1: [], 0: [Fraction(1)]}
    for i in range(1, k + 1):
        num = P.add(P.scale(a[i - 2], Fraction(2 * c0 * (k - i + 2))), P.shift(a[i - 1], 1))
        a[i] = P.scale(num, Fraction(1, 2 * i * c + i * i))
    closure = P.add(P.scale(a[k - 1], Fraction(2 * c0)), P.shift(a[k], 1))
    return tuple(tuple(a[i]) for i in range(k + 1)), tuple(closure)


def closure_l4_s1(k: int, c0: int) -> ClosureSystem:
    _, closure = l4s1_symbolic(k, c0)
    coeffs = P.monic(list(closure))
    rel = {(1, 0, 0): Fraction(1), (0, 0, 0): Fraction(2 * k + 2)}
    return ClosureSystem("l4s1", k, "b2", coeffs, c0=c0, relations=[rel])


def _l4s1_solution(k: int, c0: int, b2: CNum, label: str) -> SolutionForm | None:
    polys, _ = l4s1_symbolic(k, c0)
    coeffs = [P.evaluate([CNum(x) for x in p], b2) if p else CNum(0) for p in polys]
    coeffs = [CNum.coerce(x) for x in coeffs]
    if not _nonzero(coeffs[k]):
        return None
    c = CNum(-(k + 1))
    spec = EqSpec(4, 1, b2, c * c)
    g = ExpPoly({2: c0, 0: c})
    sol = SolutionForm(spec, _kappa(coeffs), g, k, CNum(c0), c, {"case": "l4s1", "branch": label})
    return _finish(sol)


def build_l4_s1(k: int, c0) -> tuple[ClosureSystem, list[SolutionForm]]:
    """Closure polynomial P(b2) and verified solutions for l = 4, s = 1.

    c = -(k+1), b3 = (k+1)^2; b2 ranges over the nonzero roots of P.
    """
    c0 = CNum.coerce(c0).as_integer()
    if c0 not in (1, -1):
        raise BuilderError("c0 must satisfy c0^2 = 1")
    if k < 1:
        raise BuilderError("the l=4, s=1 case needs k >= 1")
    system = closure_l4_s1(k, c0)
    sols = []
    for idx, b2 in enumerate(_frac_poly_roots(system.coeffs)):
        if not _nonzero(b2):
            system.degenerate.append("root b2 = 0 excluded (b2 must be nonzero)")
            continue
        system.roots.append(b2)
        sol = _l4s1_solution(k, c0, b2, f"c0={c0:+d},root={idx}")
        if sol is not None:
            sols.append(sol)
    return system, sols


# ---------------------------------------------------------------------------
# l = 4, s = 3
# a_i = c1^(i mod 2) R_i(t) with R_i rational in t once c1^2 -> -(2 + t + 2k) c0


def _rf_reduce(num: list, den: list) -> tuple[list, list]:
    num, den = P.trim(num), P.trim(den)
    if not num:
        return [], [Fraction(1)]
    g = P.gcd(num, den)
    num, _ = P.divmod_poly(num, g)
    den, _ = P.divmod_poly(den, g)
    lead = den[-1]
    return [x / lead for x in num], [x / lead for x in den]


def _rf_add(x, y):
    (n1, d1), (n2, d2) = x, y
    return _rf_reduce(P.add(P.mul(n1, d2), P.mul(n2, d1)), P.mul(d1, d2))


def _rf_mul_poly(x, p):
    return _rf_reduce(P.mul(x[0], p), x[1])


def _rf_div_poly(x, p):
    return _rf_reduce(x[0], P.mul(x[1], p))


@lru_cache(maxsize=None)
def l4s3_closure_poly(k: int, c0: int) -> tuple[Fraction, ...]:
    """Monic P(t), t = 2c, for the l = 4, s = 3 branch with given k and c0."""
    gamma = [Fraction(-(2 + 2 * k) * c0), Fraction(-c0)]  # c1^2 = -(2 + t + 2k) c0
    R = {-2: ([], [Fraction(1)]), -1: ([], [Fraction(1)]), 0: ([Fraction(1)], [Fraction(1)])}
    for i in range(1, k + 1):
        term1 = _rf_mul_poly(R[i - 2], [Fraction((2 * k - 2 * i + 4) * c0)])
        mult = [Fraction(2 * i - 1), Fraction(1)]
        if i % 2 == 0:
            mult = P.mul(mult, gamma)
        term2 = _rf_mul_poly(R[i - 1], P.neg(mult))
        R[i] = _rf_div_poly(_rf_add(term1, term2), [Fraction(i * i), Fraction(i)])
    mult = [Fraction(2 * k + 1), Fraction(1)]
    if k % 2 == 1:
        mult = P.mul(mult, gamma)
    q = _rf_add(_rf_mul_poly(R[k - 1], [Fraction(2 * c0)]), _rf_mul_poly(R[k], P.neg(mult)))
    return tuple(P.monic(q[0]))


def closure_l4_s3(k: int, c0: int) -> ClosureSystem:
    coeffs = list(l4s3_closure_poly(k, c0))
    rel = {(0, 0, 2): Fraction(1), (1, 0, 0): Fraction(c0), (0, 0, 0): Fraction((2 + 2 * k) * c0)}
    return ClosureSystem("l4s3", k, "t", coeffs, c0=c0, relations=[rel])


def l4s3_kappa(k: int, c, c0, c1) -> list[CNum] | None:
    """Upward recursion (2k-2i+4) c0 a_{i-2} = (2c+2i-1) c1 a_{i-1} + (2ic+i^2) a_i from a_0 = 1."""
    c, c0, c1 = CNum.coerce(c), CNum.coerce(c0), CNum.coerce(c1)
    a = {-2: CNum(0), -1: CNum(0), 0: CNum(1)}
    for i in range(1, k + 1):
        den = c * (2 * i) + i * i
        if not _nonzero(den):
            return None
        a[i] = (c0 * (2 * k - 2 * i + 4) * a[i - 2] - (c * 2 + (2 * i - 1)) * c1 * a[i - 1]) / den
    return [a[i] for i in range(k + 1)]


def _l4s3_solution(k: int, c, c0: int, c1: CNum, label: str) -> SolutionForm | None:
    coeffs = l4s3_kappa(k, c, c0, c1)
    if coeffs is None or not _nonzero(coeffs[k]):
        return None
    spec = EqSpec(4, 3, c1 * (2 * c0), c * c)
    g = ExpPoly({2: c0, 1: c1, 0: c})
    sol = SolutionForm(spec, _kappa(coeffs), g, k, CNum(c0), CNum.coerce(c),
                       {"case": "l4s3", "branch": label, "c1": c1})
    return _finish(sol)


def _degenerate_t(t: CNum, k: int) -> int | None:
    for i in range(1, k + 1):
        if not _nonzero(t + i):
            return i
    return None


def build_l4_s3(k: int) -> tuple[ClosureSystem, list[SolutionForm]]:
    """Closure polynomial P(t), t = 2c, and verified solutions for l = 4, s = 3."""
    if k < 0:
        raise BuilderError("k must be nonnegative")
    plus, minus = l4s3_closure_poly(k, 1), l4s3_closure_poly(k, -1)
    if plus != minus:
        raise BuilderError(f"closure polynomial depends on c0 for k={k}")
    system = ClosureSystem("l4s3", k, "t", list(plus))
    sols = []
    for idx, t in enumerate(_frac_poly_roots(system.coeffs)):
        system.roots.append(t)
        bad = _degenerate_t(t, k)
        if bad is not None:
            system.degenerate.append(f"root t = {t} makes the recursion denominator i(t+i) vanish at i={bad}")
            continue
        c = t / 2
        for c0 in (1, -1):
            c1sq = -(t + (2 + 2 * k)) * c0
            if not _nonzero(c1sq):
                system.degenerate.append(f"root t = {t}, c0 = {c0:+d} gives c1 = 0, hence b2 = 0")
                continue
            for sign, c1 in zip("+-", sqrt_branches(c1sq)):
                sol = _l4s3_solution(k, c, c0, c1, f"root={idx},c0={c0:+d},c1={sign}")
                if sol is not None:
                    sols.append(sol)
    return system, sols


# ---------------------------------------------------------------------------
# l = 2 pairs with a constant nonzero Wronskian


def build_pair_cor45(k1: int, k2: int, c0) -> tuple[EqSpec, SolutionForm, SolutionForm]:
    """Two independent zero-scarce solutions for b2 = c0 (k1 - k2), 4 b3 = (k1 + k2 + 1)^2."""
    if k1 == k2:
        raise BuilderError("k1 and k2 must be distinct nonnegative integers")
    if k1 < 0 or k2 < 0:
        raise BuilderError("k1 and k2 must be nonnegative")
    c0 = CNum.coerce(c0).as_integer()
    if c0 not in (1, -1):
        raise BuilderError("c0 must satisfy c0^2 = 1")
    c = CNum(Fraction(-(k1 + k2 + 1), 2))
    spec = EqSpec(2, 1, CNum(c0 * (k1 - k2)), c * c)
    f1 = _l2_solution(spec, k1, c, c0, f"pair:f1,c0={c0:+d}")
    f2 = _l2_solution(spec, k2, c, -c0, f"pair:f2,c0={-c0:+d}")
    if f1 is None or f2 is None:
        raise BuilderError(f"pair construction failed for k1={k1}, k2={k2}")
    return spec, f1, f2


# ---------------------------------------------------------------------------
# coefficient system of the n-th power expansion


def multinomial_C(cs, n: int, k0: int):
    """Coefficient of x^k0 in (sum_j cs[j] x^j)^n via the multinomial sum."""
    m = len(cs) - 1
    total = 0

    def rec(idx: int, left: int, weight: int, coef, denom: int):
        nonlocal total
        if idx > m:
            if left == 0 and weight == k0:
                total = total + coef * Fraction(factorial(n), denom)
            return
        for j in range(left + 1):
            w = weight + idx * j
            if w > k0:
                break
            rec(idx + 1, left - j, w, coef * cs[idx] ** j if j else coef, denom * factorial(j))

    rec(0, n, 0, 1, 1)
    return total


@dataclass(frozen=True)
class CjSequence:
    """c_j = ratio_j * c1^j / c0^(j-1); equivalently t_j c1^j / (-2 c0)^(j-1)."""

    n: int
    ratios: tuple[Fraction, ...]

    @property
    def t(self) -> tuple[Fraction, ...]:
        return tuple(r * (-2) ** (j - 1) for j, r in enumerate(self.ratios) if j >= 1)

    def values(self, c0, c1) -> list:
        return [c0] + [r * c1 ** j / c0 ** (j - 1) for j, r in enumerate(self.ratios) if j >= 1]

    def leading_constraints(self, c0, c1) -> list:
        """Residuals of c0^n = 1 and, when c1 is present, n c0^(n-1) c1 = 1."""
        out = [c0 ** self.n - 1]
        if len(self.ratios) > 1:
            out.append(self.n * c0 ** (self.n - 1) * c1 - 1)
        return out


def cj_sequence(n: int, m: int) -> CjSequence:
    """Solve C_2 = ... = C_m = 0 successively for c_2..c_m."""
    if n < 2 or m < 0:
        raise BuilderError("need n >= 2 and m >= 0")
    ratios = [Fraction(1)] + ([Fraction(1)] if m >= 1 else [])
    for j in range(2, m + 1):
        rest = multinomial_C(ratios + [Fraction(0)], n, j)
        ratios.append(-rest / n)
    return CjSequence(n, tuple(ratios))


# ---------------------------------------------------------------------------
# small decision helpers


def alpha_admissible(alpha) -> tuple[int, bool]:
    """m = least integer with alpha <= (2(m+1)-1)/(2(m+1)); admissible iff equality."""
    alpha = Fraction(alpha) if not isinstance(alpha, str) else Fraction(alpha.strip())
    if not (0 < alpha < 1):
        raise BuilderError("alpha must lie in (0, 1)")
    m = 0
    while alpha > Fraction(2 * m + 1, 2 * m + 2):
        m += 1
    return m, alpha == Fraction(2 * m + 1, 2 * m + 2)


def subnormal_exponent_check(P0, Q0, c) -> bool:
    """Whether c^2 + c P(0) + Q(0) = 0."""
    P0, Q0, c = CNum.coerce(P0), CNum.coerce(Q0), CNum.coerce(c)
    return not _nonzero(c * c + c * P0 + Q0)


# ---------------------------------------------------------------------------
# parameter-driven construction (used by the CLI)


def solve_l4_s1(b2, b3) -> list[SolutionForm]:
    b2, b3 = CNum.coerce(b2), CNum.coerce(b3)
    out = []
    for c in sqrt_branches(b3):
        k = (-c - 1).as_integer()
        if k is None or k < 1:
            continue
        for c0 in (1, -1):
            coeffs = list(closure_l4_s1(k, c0).coeffs)
            val = P.evaluate([CNum(x) for x in coeffs], b2)
            if _nonzero(CNum.coerce(val)):
                continue
            sol = _l4s1_solution(k, c0, b2, f"c0={c0:+d}")
            if sol is not None:
                out.append(sol)
    return out


def solve_l4_s3(b2, b3) -> list[SolutionForm]:
    b2, b3 = CNum.coerce(b2), CNum.coerce(b3)
    out = []
    for c0 in (1, -1):
        c1 = b2 / (2 * c0)
        for c in sqrt_branches(b3):
            t = c * 2
            k = ((-(c1 * c1) / c0 - 2 - t) / 2).as_integer()
            if k is None or k < 0 or _degenerate_t(t, k) is not None:
                continue
            val = P.evaluate([CNum(x) for x in l4s3_closure_poly(k, c0)], t)
            if _nonzero(CNum.coerce(val)):
                continue
            sol = _l4s3_solution(k, c, c0, c1, f"c0={c0:+d}")
            if sol is not None:
                out.append(sol)
    return out


def construct(spec_or_l, s=None, b2=None, b3=None) -> list[SolutionForm]:
    """Every zero-scarce solution of the characterised cases for the given parameters.

    Raises OddDegreeError for odd l and BuilderError for even l outside {2, 4}.
    """
    if isinstance(spec_or_l, EqSpec):
        spec = spec_or_l
    else:
        if spec_or_l % 2:
            EqSpec(spec_or_l, s, b2, b3)
            raise OddDegreeError(ODD_L_NOTE)
        spec = EqSpec(spec_or_l, s, b2, b3)
    if not spec.even:
        raise OddDegreeError(ODD_L_NOTE)
    if (spec.l, spec.s) == (2, 1):
        return build_l2(spec.b2, spec.b3)
    if (spec.l, spec.s) == (4, 1):
        return solve_l4_s1(spec.b2, spec.b3)
    if (spec.l, spec.s) == (4, 3):
        return solve_l4_s3(spec.b2, spec.b3)
    raise BuilderError(f"no closed-form characterisation for l={spec.l}; use the probe")


def enumerate_case(case: str, k_max: int) -> list:
    """Deterministic enumeration of closure systems and solutions up to k_max."""
    out = []
    if case == "l2":
        for k, c0 in product(range(k_max + 1), (1, -1)):
            out.append({"k": k, "c0": c0, "system": closure_l2(k, c0)})
    elif case == "l4s1":
        for k, c0 in product(range(1, k_max + 1), (1, -1)):
            system, sols = build_l4_s1(k, c0)
            out.append({"k": k, "c0": c0, "system": system, "solutions": sols})
    elif case == "l4s3":
        for k in range(k_max + 1):
            system, sols = build_l4_s3(k)
            out.append({"k": k, "system": system, "solutions": sols})
    elif case == "cor45":
        for k1 in range(k_max + 1):
            for k2 in range(k1):
                for c0 in (1, -1):
                    spec, f1, f2 = build_pair_cor45(k1, k2, c0)
                    out.append({"k1": k1, "k2": k2, "c0": c0, "spec": spec, "solutions": [f1, f2]})
    else:
        raise BuilderError(f"unknown case {case!r}")
    return out


__all__ = [
    "BuilderError",
    "ClosureSystem",
    "CjSequence",
    "OddDegreeError",
    "alpha_admissible",
    "build_l2",
    "build_l4_s1",
    "build_l4_s3",
    "build_pair_cor45",
    "cj_sequence",
    "closure_l2",
    "closure_l4_s1",
    "closure_l4_s3",
    "construct",
    "csqrt",
    "enumerate_case",
    "multinomial_C",
    "subnormal_exponent_check",
]
