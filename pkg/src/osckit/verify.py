"""Residual and Wronskian checks for closed-form solutions.

The residual is the Riccati-type identity for g = h' multiplied through by
kappa, so it stays inside the exponential-polynomial ring:

    R = kappa (g^2 + g') + 2 kappa' g + kappa'' - A kappa.

f = kappa e^h solves f'' = A f exactly when R vanishes.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .cnum import CNum
from .expalg import FLOAT_ZERO_TOL, ExpPoly
from .solution import EqSpec, SolutionForm


class StructureError(ValueError):
    """The Wronskian of the pair is not a constant exponential polynomial."""


@dataclass
class VerifyReport:
    residual: ExpPoly
    is_solution: bool
    wronskian_constant: CNum | None = None
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "residual": self.residual.to_json(),
            "residual_max_norm": str(self.residual.max_norm()),
            "is_solution": self.is_solution,
            "wronskian_constant": None if self.wronskian_constant is None else self.wronskian_constant.to_json(),
            "notes": list(self.notes),
        }


def residual_for(coefficient: ExpPoly, kappa: ExpPoly, g: ExpPoly) -> ExpPoly:
    kp = kappa.differentiate()
    kpp = kp.differentiate()
    return kappa * (g * g + g.differentiate()) + (kp * g).scale(2) + kpp - coefficient * kappa


def residual(spec: EqSpec, sol: SolutionForm) -> ExpPoly:
    if not sol.kappa:
        raise ValueError("kappa must be nonzero")
    return residual_for(spec.coefficient(), sol.kappa, sol.g)


def verify(sol: SolutionForm, spec: EqSpec | None = None, tol: float = FLOAT_ZERO_TOL) -> VerifyReport:
    spec = spec or sol.spec
    r = residual(spec, sol)
    ok = r.is_zero(tol)
    notes = []
    if not ok:
        notes.append(f"residual max-norm {r.max_norm()} exceeds tolerance")
    elif not r.is_exact() and r:
        notes.append(f"float residual max-norm {r.max_norm()} below {tol}")
    return VerifyReport(residual=r, is_solution=ok, notes=notes)


def wronskian_poly(f1: SolutionForm, f2: SolutionForm, tol: float = FLOAT_ZERO_TOL) -> ExpPoly:
    """W = f1' f2 - f1 f2' as an exponential polynomial.

    Requires exp(h1 + h2) to be an integer power of exp(z / den), i.e. the
    nonconstant parts of g1 + g2 cancel and (c1 + c2) * den is an integer.
    """
    k1, k2 = f1.kappa, f2.kappa
    bracket = k1.differentiate() * k2 - k1 * k2.differentiate() + (f1.g - f2.g) * k1 * k2
    if bracket.is_zero(tol):
        return ExpPoly.zero()
    gsum = f1.g + f2.g
    csum = gsum[0]
    if not (gsum - ExpPoly.constant(csum)).is_zero(tol):
        raise StructureError(f"exp(h1 + h2) is not an exponential monomial: g1 + g2 = {gsum}")
    den = bracket.den
    shift = (csum * den).as_integer(tol=1e-20)
    if shift is None:
        raise StructureError(f"(c1 + c2) = {csum} does not give an integer exponent shift")
    return bracket.shift(shift)


def wronskian(f1: SolutionForm, f2: SolutionForm, tol: float = FLOAT_ZERO_TOL) -> CNum:
    """The constant f1' f2 - f1 f2'; zero for a dependent pair."""
    w = wronskian_poly(f1, f2, tol)
    if not w:
        return CNum(0)
    if not w.is_constant(tol):
        raise StructureError(f"Wronskian is not constant: {w}; the pair does not solve one equation")
    return w[0]


def certify_pair(f1: SolutionForm, f2: SolutionForm, tol: float = FLOAT_ZERO_TOL) -> VerifyReport:
    """Residuals of both members plus the Wronskian constant."""
    r1, r2 = verify(f1, tol=tol), verify(f2, tol=tol)
    notes = [f"f1: {n}" for n in r1.notes] + [f"f2: {n}" for n in r2.notes]
    try:
        w = wronskian(f1, f2, tol)
    except StructureError as exc:
        return VerifyReport(r1.residual + r2.residual, False, None, notes + [str(exc)])
    independent = not w.is_zero(tol)
    if not independent:
        notes.append("Wronskian vanishes: the pair is linearly dependent")
    ok = r1.is_solution and r2.is_solution and independent
    return VerifyReport(r1.residual + r2.residual, ok, w, notes)


def numeric_wronskian(f1: SolutionForm, f2: SolutionForm, z) -> complex:
    return complex(f1.fprime(z) * f2.f(z) - f1.f(z) * f2.fprime(z))
