"""Closure systems for general even l, derived from the full residual.

Independent of the dedicated builders: g = c + sum_j c_j e^{(m+1-j t)z} is
written down with unknowns (t = 2c, and b2 or c1), the kappa-cleared
residual is expanded symbolically as a polynomial in zeta = e^z, kappa's
coefficients are eliminated upward (the coefficient of zeta^i is linear in
a_i with factor i (t + i)), and the leftover coefficients form the closure
system.  Numeric roots of that system are only reported after the residual
verifier accepts them.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import mpmath
import sympy as sp

from . import polyutil as P
from .builder import (
    GENS,
    ClosureSystem,
    cj_sequence,
    closure_l2,
    closure_l4_s1,
    closure_l4_s3,
)
from .cnum import CNum
from .expalg import FLOAT_ZERO_TOL, ExpPoly
from .solution import EqSpec, SolutionForm, smallest_q
from .verify import verify

log = logging.getLogger(__name__)

T, B2, C1, ZETA = sp.symbols("t b2 c1 zeta")
SYMBOLS = {"t": T, "b2": B2, "c1": C1}


class ProbeError(ValueError):
    pass


@dataclass
class Candidate:
    values: dict
    residual_norm: float
    verified: bool
    solution: SolutionForm | None = None

    def to_json(self) -> dict:
        return {
            "values": {k: v.to_json() for k, v in self.values.items()},
            "residual_max_norm": str(self.residual_norm),
            "verified": self.verified,
        }


@dataclass
class ProbeResult:
    l: int
    s: int
    k: int
    c0: int
    q: int
    leading: sp.Expr
    closure: list[sp.Expr]
    unknown: str | None
    family: bool = False
    candidates: list[Candidate] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def polynomials(self) -> list[sp.Expr]:
        return [self.leading] + list(self.closure)

    @property
    def verified(self) -> list[SolutionForm]:
        return [c.solution for c in self.candidates if c.verified]

    def normalized(self) -> frozenset:
        return normalize_polys(self.polynomials)

    def to_json(self) -> dict:
        return {
            "l": self.l,
            "s": self.s,
            "k": self.k,
            "c0": self.c0,
            "q": self.q,
            "leading": str(self.leading),
            "closure": [str(e) for e in self.closure],
            "unknown": self.unknown,
            "family": self.family,
            "candidates": [c.to_json() for c in self.candidates],
            "verified_count": len(self.verified),
            "notes": list(self.notes),
        }


# ---------------------------------------------------------------------------
# normalisation shared with the dedicated builders


def _side_factor(f: sp.Expr) -> bool:
    # b2 != 0, and c1 = b2 / (2 c0)
    return f in (B2, C1)


def normalize_poly(expr) -> sp.Expr | None:
    """Squarefree, monic product of the factors not excluded by b2 != 0.

    Returns None for polynomials that vanish identically and 1 for nonzero
    constants (an inconsistent equation).
    """
    expr = sp.expand(expr)
    if expr == 0:
        return None
    _, factors = sp.factor_list(expr, T, B2, C1)
    keep = sp.Integer(1)
    for f, _mult in factors:
        if f.free_symbols and not _side_factor(f):
            keep *= f
    if keep == 1:
        return sp.Integer(1)
    return sp.Poly(keep, T, B2, C1).monic().as_expr()


def normalize_polys(polys) -> frozenset:
    out = set()
    for p in polys:
        n = normalize_poly(p)
        if n is not None:
            out.add(sp.expand(n))
    return frozenset(out)


def sparse_to_sympy(poly: dict) -> sp.Expr:
    expr = sp.Integer(0)
    for exps, a in poly.items():
        term = sp.Rational(a.numerator, a.denominator)
        for g, e in zip(GENS, exps):
            term *= SYMBOLS[g] ** e
        expr += term
    return expr


def dedicated_system(l: int, s: int, k: int, c0: int) -> ClosureSystem:
    if (l, s) == (2, 1):
        return closure_l2(k, c0)
    if (l, s) == (4, 1):
        return closure_l4_s1(k, c0)
    if (l, s) == (4, 3):
        return closure_l4_s3(k, c0)
    raise ProbeError(f"no dedicated builder for l={l}, s={s}")


def normalized_dedicated(l: int, s: int, k: int, c0: int) -> frozenset:
    return normalize_polys(sparse_to_sympy(p) for p in dedicated_system(l, s, k, c0).polynomials())


# ---------------------------------------------------------------------------
# symbolic residual


def _exponential_part(l: int, s: int, c0: int):
    """Return (G, b2 expression, second unknown) for the e^z-polynomial part of g."""
    m, tgap, q = l // 2 - 1, l - s, smallest_q(l, s)
    if q == 0:
        return c0 * ZETA ** (m + 1), B2, B2
    seq = cj_sequence(2, q)
    G = sp.Integer(0)
    for j, r in enumerate(seq.ratios):
        cj = c0 if j == 0 else sp.Rational(r.numerator, r.denominator) * C1 ** j * sp.Integer(c0) ** (1 - j)
        G += cj * ZETA ** (m + 1 - j * tgap)
    return G, 2 * c0 * C1, C1


def _zd(expr):
    return sp.expand(ZETA * sp.diff(expr, ZETA))


def residual_coefficients(l: int, s: int, k: int, c0: int):
    """Coefficients E_0..E_deg of the kappa-cleared residual and the kappa symbols."""
    G, b2expr, _ = _exponential_part(l, s, c0)
    avars = [sp.Integer(1)] + list(sp.symbols(f"a1:{k + 1}")) if k else [sp.Integer(1)]
    kappa = sum(a * ZETA ** i for i, a in enumerate(avars))
    c = T / 2
    g = c + G
    R = kappa * (g * g + _zd(g)) + 2 * _zd(kappa) * g + _zd(_zd(kappa)) \
        - (ZETA ** l + b2expr * ZETA ** s + c * c) * kappa
    poly = sp.Poly(sp.expand(R), ZETA)
    deg = poly.degree()
    coeffs = [poly.coeff_monomial(ZETA ** i) for i in range(deg + 1)]
    return coeffs, avars


# ---------------------------------------------------------------------------


def _validate(l: int, s: int, k_max: int) -> None:
    if l % 2:
        raise ProbeError(f"l = {l} is odd: l must be even for lambda(f) < infinity")
    if not (1 <= s < l) or gcd(l, s) != 1:
        raise ProbeError(f"need 1 <= s < l with gcd(l, s) = 1, got l={l}, s={s}")
    if k_max < 0:
        raise ProbeError("k_max must be nonnegative")


def probe_branch(l: int, s: int, k: int, c0: int, solve: bool = True) -> ProbeResult:
    _validate(l, s, k)
    m, q = l // 2 - 1, smallest_q(l, s)
    E, avars = residual_coefficients(l, s, k, c0)
    top = k + m + 1
    if len(E) - 1 > top or any(sp.expand(e) != 0 for e in E[top + 1:]):
        raise ProbeError("residual degree exceeds k + m + 1; exponent bookkeeping is wrong")
    E = E + [sp.Integer(0)] * (top + 1 - len(E))
    if sp.expand(E[0]) != 0:
        raise ProbeError("constant coefficient does not vanish with b3 = c^2")

    # leading condition: E_top = L * a_k
    ak = avars[k]
    leading = sp.expand(sp.diff(E[top], ak)) if k else sp.expand(E[top])
    if k and sp.expand(E[top] - leading * ak) != 0:
        raise ProbeError("top coefficient involves more than a_k")

    subs: dict = {}
    for i in range(1, k + 1):
        ei = sp.expand(E[i].subs(subs))
        coef = sp.expand(sp.diff(ei, avars[i]))
        if sp.expand(coef - i * (T + i)) != 0:
            raise ProbeError(f"E_{i} is not triangular in a_{i}")
        subs[avars[i]] = sp.cancel(-(ei - coef * avars[i]) / coef)
    closure_raw = []
    for i in range(k + 1, top):
        num, _den = sp.fraction(sp.cancel(sp.together(E[i].subs(subs))))
        num = sp.expand(num)
        if num != 0:
            closure_raw.append(num)

    result = ProbeResult(l, s, k, c0, q, leading, [], None)
    Lpoly = sp.Poly(leading, T, B2, C1)
    if C1 in leading.free_symbols:
        # t = 1 case: leading condition carries c1^(m+1); reduce the rest modulo it
        result.closure = [sp.expand(sp.rem(p, leading, C1)) for p in closure_raw]
        result.unknown = "t"
    else:
        if Lpoly.degree(T) != 1:
            raise ProbeError(f"leading condition {leading} is not linear in t")
        tval = sp.solve(leading, T)[0]
        result.closure = [sp.expand(sp.numer(sp.together(p.subs(T, tval)))) for p in closure_raw]
        if tval.free_symbols:
            result.family = True
            result.unknown = "b2"
            result.notes.append(f"t = {tval}: one-parameter family")
        else:
            result.unknown = "c1" if q else "b2"
        result.notes.append(f"leading condition fixes t = {tval}")
    result.closure = [p for p in result.closure if p != 0]
    if solve and not result.family:
        _solve_candidates(result, subs, avars)
    return result


def general_probe(l: int, s: int, k_max: int, solve: bool = True) -> list[ProbeResult]:
    """Closure systems and verifier-gated roots for every k <= k_max and c0 = +1, -1."""
    _validate(l, s, k_max)
    out = []
    for k in range(k_max + 1):
        for c0 in (1, -1):
            out.append(probe_branch(l, s, k, c0, solve=solve))
    return out


# ---------------------------------------------------------------------------
# numeric stage


def _fraction_coeffs(expr, var) -> list[Fraction]:
    poly = sp.Poly(expr, var)
    desc = poly.all_coeffs()
    return [Fraction(int(sp.numer(c)), int(sp.denom(c))) for c in reversed(desc)]


def _roots_of(expr, var) -> list[CNum]:
    from .builder import _frac_poly_roots

    coeffs = _fraction_coeffs(expr, var)
    if P.degree(coeffs) < 1:
        return []
    return _frac_poly_roots(coeffs)


def _to_sympy_number(x: CNum):
    if x.exact:
        re, im = x.real, x.imag
        return sp.Rational(re.numerator, re.denominator) + sp.I * sp.Rational(im.numerator, im.denominator)
    z = x.to_mpc()
    digits = int(mpmath.mp.prec * 0.30103) + 5
    return sp.Float(str(z.real), digits) + sp.I * sp.Float(str(z.imag), digits)


def _to_cnum(expr) -> CNum:
    expr = sp.expand(sp.sympify(expr))
    re, im = sp.re(expr), sp.im(expr)
    if re.is_Rational and im.is_Rational:
        return CNum(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))
    digits = int(mpmath.mp.prec * 0.30103) + 5
    val = sp.N(expr, digits)
    return CNum.from_mpc(mpmath.mpc(mpmath.mpf(str(sp.re(val))), mpmath.mpf(str(sp.im(val)))))


def _fmt_point(point: dict) -> str:
    return ", ".join(f"{k} = {v}" for k, v in point.items())


def _candidate_points(result: ProbeResult) -> list[dict]:
    """Numeric roots of every closure polynomial, before any verification."""
    points = []
    seen = set()
    if result.unknown == "t":
        for p in result.closure:
            up = sp.resultant(p, result.leading, C1) if C1 in p.free_symbols else p
            up = sp.expand(up)
            if not up.free_symbols:
                continue
            for t in _roots_of(up, T):
                for c1 in _roots_of_c1(result.leading, t):
                    key = (complex(t), complex(c1))
                    if key not in seen:
                        seen.add(key)
                        points.append({"t": t, "c1": c1})
        return points
    tval = sp.solve(result.leading, T)[0]
    t = _to_cnum(tval)
    var = B2 if result.unknown == "b2" else C1
    for p in result.closure:
        if not p.free_symbols:
            continue
        for r in _roots_of(p, var):
            key = complex(r)
            if key not in seen:
                seen.add(key)
                points.append({"t": t, result.unknown: r})
    return points


def _roots_of_c1(leading, t: CNum) -> list[CNum]:
    expr = sp.expand(leading.subs(T, _to_sympy_number(t)))
    poly = sp.Poly(expr, C1)
    coeffs = [_to_cnum(c) for c in reversed(poly.all_coeffs())]
    if all(c.exact for c in coeffs):
        from .builder import _frac_poly_roots

        if all(c.is_real() for c in coeffs):
            return _frac_poly_roots([c.real for c in coeffs])
    return [CNum.from_mpc(z) for z in P.numeric_roots(coeffs)]


def _solve_candidates(result: ProbeResult, subs: dict, avars: list) -> None:
    l, s, k, c0 = result.l, result.s, result.k, result.c0
    G, b2expr, _ = _exponential_part(l, s, c0)
    for point in _candidate_points(result):
        env = {T: _to_sympy_number(point["t"])}
        if "b2" in point:
            env[B2] = _to_sympy_number(point["b2"])
        if "c1" in point:
            env[C1] = _to_sympy_number(point["c1"])
        try:
            a_vals = [CNum(1)] + [_to_cnum(subs[avars[i]].subs(env)) for i in range(1, k + 1)]
        except (ZeroDivisionError, TypeError, ValueError) as exc:
            result.notes.append(f"candidate {_fmt_point(point)} skipped: {exc}")
            continue
        b2 = _to_cnum(sp.sympify(b2expr).subs(env))
        c = point["t"] / 2
        if b2.is_zero(None if b2.exact else FLOAT_ZERO_TOL):
            result.notes.append(f"candidate {_fmt_point(point)} skipped: b2 = 0")
            continue
        gpoly = sp.Poly(sp.expand(G.subs(env)), ZETA)
        gterms = {int(mon[0]): _to_cnum(coef) for mon, coef in zip(gpoly.monoms(), gpoly.coeffs())}
        gterms[0] = c
        spec = EqSpec(l, s, b2, c * c)
        sol = SolutionForm(spec, ExpPoly.from_coeffs(a_vals), ExpPoly(gterms), k, CNum(c0), c,
                           {"case": f"probe l={l} s={s}", **{kk: v for kk, v in point.items()}})
        report = verify(sol)
        ok = report.is_solution and not a_vals[k].is_zero(None if a_vals[k].exact else FLOAT_ZERO_TOL)
        if ok:
            sol = SolutionForm(**{**sol.__dict__, "verified": True})
        result.candidates.append(Candidate(point, report.residual.max_norm(), ok, sol if ok else None))
    if any(c.verified for c in result.candidates) and (l, s) not in ((2, 1), (4, 1), (4, 3)):
        result.notes.append("verified solution outside l in {2, 4}: counterexample candidate")
