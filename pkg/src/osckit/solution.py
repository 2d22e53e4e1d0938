"""Equation parameters and closed-form solution candidates ``f = kappa * exp(h)``."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd

import mpmath

from .cnum import CNum
from .expalg import ExpPoly

SCHEMA_VERSION = 1


class SpecError(ValueError):
    """Equation parameters violate l > s >= 1, gcd(l, s) = 1 or b2 != 0."""


def smallest_q(l: int, s: int) -> int:
    """Smallest q >= 0 with s/l <= (2(q+1) - 1) / (2(q+1))."""
    alpha = Fraction(s, l)
    q = 0
    while alpha > Fraction(2 * (q + 1) - 1, 2 * (q + 1)):
        q += 1
    return q


@dataclass(frozen=True)
class EqSpec:
    """Parameters of f'' - (e^{lz} + b2 e^{sz} + b3) f = 0."""

    l: int
    s: int
    b2: CNum
    b3: CNum

    def __post_init__(self):
        object.__setattr__(self, "b2", CNum.coerce(self.b2))
        object.__setattr__(self, "b3", CNum.coerce(self.b3))
        if not (self.l > self.s >= 1):
            raise SpecError(f"need l > s >= 1, got l={self.l}, s={self.s}")
        if gcd(self.l, self.s) != 1:
            raise SpecError(f"l={self.l} and s={self.s} are not coprime")
        if self.b2.is_zero():
            raise SpecError("b2 must be nonzero")

    @property
    def even(self) -> bool:
        return self.l % 2 == 0

    @property
    def m(self) -> int:
        if not self.even:
            raise SpecError("m is only defined for even l")
        return self.l // 2 - 1

    @property
    def t(self) -> int:
        return self.l - self.s

    @property
    def q(self) -> int:
        return smallest_q(self.l, self.s)

    def coefficient(self) -> ExpPoly:
        """A(z) = e^{lz} + b2 e^{sz} + b3."""
        return ExpPoly({self.l: 1, self.s: self.b2, 0: self.b3})

    def to_json(self) -> dict:
        return {"l": self.l, "s": self.s, "b2": self.b2.to_json(), "b3": self.b3.to_json()}


@dataclass(frozen=True)
class SolutionForm:
    """A candidate f = kappa * exp(h) with g = h' (constant term c included).

    ``kappa`` is a polynomial in e^z with nonzero constant and leading terms;
    ``h`` has no additive constant.
    """

    spec: EqSpec
    kappa: ExpPoly
    g: ExpPoly
    k: int
    c0: CNum
    c: CNum
    branch: dict = field(default_factory=dict)
    verified: bool | None = None

    def exp_part(self) -> ExpPoly:
        """Nonconstant part of h, i.e. the antiderivative of g - c."""
        out = {}
        for j, a in self.g.terms.items():
            if j != 0:
                out[j] = a / Fraction(j, self.g.den)
        return ExpPoly(out, self.g.den)

    def h_value(self, z) -> mpmath.mpc:
        z = mpmath.mpc(z)
        return self.exp_part().evaluate(z) + self.c.to_mpc() * z

    def f(self, z) -> mpmath.mpc:
        return self.kappa.evaluate(z) * mpmath.exp(self.h_value(z))

    def fprime(self, z) -> mpmath.mpc:
        kp = self.kappa.differentiate()
        return (kp.evaluate(z) + self.kappa.evaluate(z) * self.g.evaluate(z)) * mpmath.exp(self.h_value(z))

    def scaled(self, a) -> "SolutionForm":
        return replace(self, kappa=self.kappa.scale(a), verified=None)

    def with_spec(self, spec: EqSpec) -> "SolutionForm":
        return replace(self, spec=spec, verified=None)

    def to_json(self) -> dict:
        out = {
            "schema": SCHEMA_VERSION,
            "l": self.spec.l,
            "s": self.spec.s,
            "b2": self.spec.b2.to_json(),
            "b3": self.spec.b3.to_json(),
            "k": self.k,
            "c0": self.c0.to_json(),
            "c": self.c.to_json(),
            "kappa": self.kappa.to_json(),
            "g": self.g.to_json(),
            "verified": bool(self.verified),
        }
        if self.branch:
            out["branch"] = {key: (v.to_json() if isinstance(v, CNum) else v) for key, v in self.branch.items()}
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "SolutionForm":
        if obj.get("schema", SCHEMA_VERSION) != SCHEMA_VERSION:
            raise ValueError(f"unsupported solution schema {obj.get('schema')!r}")
        spec = EqSpec(int(obj["l"]), int(obj["s"]), CNum.from_json(obj["b2"]), CNum.from_json(obj["b3"]))
        branch = {}
        for key, v in obj.get("branch", {}).items():
            branch[key] = CNum.from_json(v) if isinstance(v, dict) else v
        return cls(
            spec=spec,
            kappa=ExpPoly.from_json(obj["kappa"]),
            g=ExpPoly.from_json(obj["g"]),
            k=int(obj["k"]),
            c0=CNum.from_json(obj["c0"]),
            c=CNum.from_json(obj["c"]),
            branch=branch,
            verified=obj.get("verified"),
        )
