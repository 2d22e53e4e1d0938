"""Lommel bridge to x^2 u'' + h(x) u = 0 and Frobenius series at x = 0.

With x = e^z and f = x^{-1/2} u(x), the equation f'' = (e^{lz} + b2 e^{sz} + b3) f
becomes x^2 u'' + h(x) u = 0 with h(x) = 1/4 - b3 - b2 x^s - x^l, a regular
singular point at x = 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import mpmath

from .cnum import CNum, sqrt_branches
from .expalg import FLOAT_ZERO_TOL
from .series import PowerSeries
from .solution import EqSpec, SolutionForm

CASES = ("non-integer", "integer-difference", "equal")
TRUNCATION_TOL = 1e-12


class TruncationError(ValueError):
    """The requested point lies outside the radius where the truncated series is trustworthy."""


class MatchError(ValueError):
    pass


def _zero(x: CNum) -> bool:
    return x.is_zero(None if x.exact else FLOAT_ZERO_TOL)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LommelMap:
    h: tuple[CNum, ...]
    alpha: int = 1
    beta: int = 1
    gamma: int = 0
    p: int = 1
    d1: CNum = CNum(1)
    d2: CNum = CNum(0)
    d3: CNum = CNum(0)

    def constraints(self) -> dict[str, bool]:
        """The parameter-matching relations, evaluated for the stored values."""
        return {
            "2*gamma*p == 0": 2 * self.gamma * self.p == 0,
            "beta*p == 1": self.beta * self.p == 1,
            "alpha^l*d1 == 1": self.d1 * self.alpha == CNum(1),
        }

    def to_json(self) -> dict:
        return {
            "h": [a.to_json() for a in self.h],
            "alpha": self.alpha,
            "beta": self.beta,
            "gamma": self.gamma,
            "p": self.p,
            "d": [self.d1.to_json(), self.d2.to_json(), self.d3.to_json()],
            "constraints": self.constraints(),
        }


def lommel_map(spec: EqSpec) -> LommelMap:
    """h(x) = -(x^l + b2 x^s + (b3 - 1/4)) for alpha = beta = p = 1, gamma = 0."""
    h = [CNum(0)] * (spec.l + 1)
    h[0] = CNum(1) / 4 - spec.b3
    h[spec.s] = -spec.b2
    h[spec.l] = CNum(-1)
    return LommelMap(tuple(h), d1=CNum(1), d2=spec.b2, d3=spec.b3)


def indicial(h0) -> tuple[CNum, CNum]:
    """Roots of rho^2 - rho + h0, ordered so Re rho1 >= Re rho2."""
    h0 = CNum.coerce(h0)
    disc = CNum(1) / 4 - h0
    r = sqrt_branches(disc)[0]
    half = CNum(1) / 2
    a, b = half + r, half - r
    if a.to_mpc().real < b.to_mpc().real:
        a, b = b, a
    return a, b


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FrobeniusPair:
    """u1 = x^rho1 sum a_i x^i,  u2 = d u1 log x + x^rho2 sum b_i x^i."""

    rho1: CNum
    rho2: CNum
    d: int
    u1: PowerSeries
    u2: PowerSeries
    case: str
    h: tuple[CNum, ...]
    n0: int | None = None
    obstruction: CNum | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def N(self) -> int:
        return self.u1.N

    def to_json(self) -> dict:
        return {
            "rho1": self.rho1.to_json(),
            "rho2": self.rho2.to_json(),
            "d": self.d,
            "u1": self.u1.to_json(),
            "u2": self.u2.to_json(),
            "N": self.N,
            "case": self.case,
            "n0": self.n0,
            "obstruction": None if self.obstruction is None else self.obstruction.to_json(),
            "notes": list(self.notes),
        }


def _conv(h, coeffs, i: int) -> CNum:
    """sum_{j=1}^{min(i, L)} h_j * coeffs[i - j]."""
    acc = CNum(0)
    for j in range(1, min(i, len(h) - 1) + 1):
        if not h[j].is_zero():
            acc = acc + h[j] * coeffs[i - j]
    return acc


def frobenius_solve(h, N: int = 24) -> FrobeniusPair:
    h = tuple(CNum.coerce(a) for a in h)
    if not h:
        raise ValueError("h needs at least the constant coefficient")
    rho1, rho2 = indicial(h[0])
    diff = rho1 - rho2
    n0 = diff.as_integer(tol=1e-20)
    if n0 is not None and N < n0:
        raise ValueError(f"truncation N = {N} is below the exponent gap {n0}")

    a = [CNum(1)]
    for i in range(1, N + 1):
        a.append(-_conv(h, a, i) / (diff + i) / i)

    notes: list[str] = []
    obstruction = None
    if n0 is None:
        case, d = "non-integer", 0
        b = [CNum(1)]
        for i in range(1, N + 1):
            b.append(-_conv(h, b, i) / (i - diff) / i)
    elif n0 == 0:
        case, d = "equal", 1
        b = [CNum(0)]
        for i in range(1, N + 1):
            b.append((-_conv(h, b, i) - a[i] * (2 * i)) / (i * i))
    else:
        case = "integer-difference"
        b = [CNum(1)]
        for i in range(1, n0):
            b.append(-_conv(h, b, i) / (i - n0) / i)
        obstruction = _conv(h, b + [CNum(0)], n0)
        if _zero(obstruction):
            d = 0
            notes.append("obstruction sum vanishes: no logarithmic term")
        else:
            # rescale so that d = 1:  b0 * S + n0 * a0 = 0
            d = 1
            scale = CNum(-n0) / obstruction
            b = [x * scale for x in b]
        b.append(CNum(0))  # free coefficient b_{n0} fixed to 0
        for i in range(n0 + 1, N + 1):
            rhs = -_conv(h, b, i)
            if d:
                rhs = rhs - a[i - n0] * (2 * rho1 + 2 * (i - n0) - 1)
            b.append(rhs / (i - n0) / i)
    return FrobeniusPair(rho1, rho2, d, PowerSeries(a), PowerSeries(b), case, h, n0, obstruction, notes)


# ---------------------------------------------------------------------------
# substitution oracle (independent of the recursion above)


def _euler_part(rho: CNum, v: PowerSeries, h: PowerSeries) -> PowerSeries:
    """x^{-rho} (x^2 (x^rho v)'' + h x^rho v) = rho(rho-1) v + 2 rho x v' + x^2 v'' + h v."""
    dv = v.differentiate()
    ddv = dv.differentiate()
    N = v.N
    return (v * (rho * (rho - 1)) + dv.shift(1).truncate(N) * (2 * rho)
            + ddv.shift(2).truncate(N) + h * v)


def substitution_residual(fp: FrobeniusPair) -> tuple[PowerSeries, PowerSeries]:
    """Residual series of u1 and u2 in x^2 u'' + h u, divided by x^rho1 and x^rho2.

    For d = 1 the log term contributes d (2 x u1' - u1), which is
    x^{rho1} sum (2 rho1 + 2i - 1) a_i x^i, i.e. an x^{n0} shift relative to x^{rho2}.
    """
    N = fp.N
    hs = PowerSeries(list(fp.h[: N + 1]), N)
    r1 = _euler_part(fp.rho1, fp.u1, hs)
    r2 = _euler_part(fp.rho2, fp.u2, hs)
    if fp.d:
        n0 = fp.n0 or 0
        ls = PowerSeries([fp.u1[i] * (2 * fp.rho1 + 2 * i - 1) for i in range(N + 1)]).shift(n0).truncate(N)
        r2 = r2 + ls * fp.d
    return r1, r2


# ---------------------------------------------------------------------------
# matching against a closed-form pair


@dataclass
class MatchReport:
    D: tuple[CNum, CNum, CNum, CNum]
    discrepancy: object
    w_order: int | None
    n0: int
    w: PowerSeries

    @property
    def exact_zero(self) -> bool:
        return self.discrepancy == 0

    def to_json(self) -> dict:
        return {
            "D": [x.to_json() for x in self.D],
            "discrepancy": str(self.discrepancy),
            "w_order": self.w_order,
            "expected_w_order": self.n0,
            "w": self.w.to_json(),
        }


def closed_form_series(sol: SolutionForm, N: int, sign: int = 1) -> tuple[PowerSeries, PowerSeries]:
    """(kappa(x), exp(sign * h(x))) with x = e^z, the x^c factor removed."""
    if sol.kappa.den != 1 or sol.g.den != 1:
        raise MatchError("series expansion needs integer exponents")
    if min(sol.kappa.exponents()) < 0:
        raise MatchError("kappa has negative powers of e^z")
    kap = PowerSeries([sol.kappa[i] for i in range(N + 1)], N)
    hterms = [CNum(0)] * (N + 1)
    for j, a in sol.g.terms.items():
        if j == 0:
            continue
        if j < 0:
            raise MatchError("h has negative powers of e^z; no expansion at x = 0")
        if j <= N:
            hterms[j] = a / j * sign
    return kap, PowerSeries(hterms).exp()


def series_match(pair: tuple[SolutionForm, SolutionForm], fp: FrobeniusPair, N: int = 12) -> MatchReport:
    f1, f2 = pair
    c = f1.c
    if c != f2.c:
        raise MatchError("the two solutions carry different constants c")
    n0 = (-2 * c).as_integer()
    if n0 is None or n0 <= 0:
        raise MatchError("-2c must be a positive integer")
    if fp.n0 != n0:
        raise MatchError(f"Frobenius exponent gap {fp.n0} does not equal -2c = {n0}")
    if fp.d != 0:
        raise MatchError("the Frobenius pair carries a logarithm; no closed-form match")
    if N > fp.N:
        raise MatchError(f"N = {N} exceeds the Frobenius truncation {fp.N}")
    v1, v2 = fp.u1.truncate(N), fp.u2.truncate(N)
    k1, e1 = closed_form_series(f1, N)
    k2, e2 = closed_form_series(f2, N)
    S1, S2 = k1 * e1, k2 * e2
    b0 = v2[0]
    D2 = S1[0] / b0
    D4 = S2[0] / b0
    D1 = (S1[n0] - D2 * v2[n0]) / v1[0]
    D3 = (S2[n0] - D4 * v2[n0]) / v1[0]
    if _zero(D1 * D4 - D2 * D3):
        raise MatchError("singular matching system: the solutions are not independent")
    lhs1 = v1.shift(n0).truncate(N) * D1 + v2 * D2
    lhs2 = v1.shift(n0).truncate(N) * D3 + v2 * D4
    diffs = list((S1 - lhs1).coeffs + (S2 - lhs2).coeffs)
    if all(x.exact for x in diffs):
        disc = max((abs(x) for x in diffs if not x.is_zero()), default=0)
    else:
        disc = max(abs(x) for x in diffs)
    # w = D4 kappa11 e^{2 h11} - D2 kappa12
    _, e1sq = closed_form_series(f1, N, sign=2)
    w = k1 * e1sq * D4 - k2 * D2
    return MatchReport((D1, D2, D3, D4), disc, w.order(), n0, w)


# ---------------------------------------------------------------------------


def general_solution_eval(fp: FrobeniusPair, E1, E2, z, tol: float = TRUNCATION_TOL) -> mpmath.mpc:
    """f(z) = x^{-1/2} (E1 u1(x) + E2 u2(x)) at x = e^z, with log x taken as z.

    Taking log x = z lifts the slit-disc branch to the z-plane, so the value
    is the analytic continuation along horizontal lines.
    """
    E1, E2 = CNum.coerce(E1), CNum.coerce(E2)
    z = mpmath.mpc(z)
    x = mpmath.exp(z)
    v1, v2 = fp.u1.evaluate(x), fp.u2.evaluate(x)
    for name, s, v in (("u1", fp.u1, v1), ("u2", fp.u2, v2)):
        if s.tail_estimate(x) > tol * max(1, abs(v)):
            raise TruncationError(f"|e^z| = {mpmath.nstr(abs(x), 6)} is beyond the validated radius of {name}")
    u1 = mpmath.exp(fp.rho1.to_mpc() * z) * v1
    u2 = mpmath.exp(fp.rho2.to_mpc() * z) * v2
    if fp.d:
        u2 += fp.d * u1 * z
    return mpmath.exp(-z / 2) * (E1.to_mpc() * u1 + E2.to_mpc() * u2)
