"""Exponential polynomials  sum_j a_j exp(j z / den),  den in {1, 2}.

An :class:`ExpPoly` is the same thing as a Laurent polynomial in
``zeta = exp(z / den)``; ring operations act on the exponent map and
``d/dz`` multiplies the coefficient at ``j`` by ``j / den``.
"""
from __future__ import annotations

import cmath
from fractions import Fraction
from typing import Iterable, Mapping

import mpmath
import numpy as np

from . import polyutil
from .cnum import CNum

FLOAT_ZERO_TOL = 1e-25


class ExpPoly:
    """Immutable exponential polynomial in canonical form."""

    __slots__ = ("_den", "_terms")

    def __init__(self, terms: Mapping[int, object] | Iterable[tuple[int, object]] = (), den: int = 1):
        if den not in (1, 2):
            raise ValueError(f"exponent denominator must be 1 or 2, got {den}")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, CNum] = {}
        for j, a in items:
            j = int(j)
            a = CNum.coerce(a)
            acc[j] = acc[j] + a if j in acc else a
        clean = {j: a for j, a in acc.items() if not a.is_zero()}
        if den == 2 and all(j % 2 == 0 for j in clean):
            clean = {j // 2: a for j, a in clean.items()}
            den = 1
        self._den = den
        self._terms = dict(sorted(clean.items()))

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls) -> "ExpPoly":
        return cls()

    @classmethod
    def constant(cls, a) -> "ExpPoly":
        return cls({0: a})

    @classmethod
    def monomial(cls, j: int, a=1, den: int = 1) -> "ExpPoly":
        return cls({j: a}, den)

    @classmethod
    def from_coeffs(cls, coeffs: Iterable, start: int = 0, den: int = 1) -> "ExpPoly":
        """Build from consecutive coefficients a_start, a_{start+1}, ..."""
        return cls({start + i: a for i, a in enumerate(coeffs)}, den)

    # -- inspection ---------------------------------------------------
    @property
    def den(self) -> int:
        return self._den

    @property
    def terms(self) -> dict[int, CNum]:
        return dict(self._terms)

    def __getitem__(self, j: int) -> CNum:
        return self._terms.get(j, CNum(0))

    def exponents(self) -> list[int]:
        return list(self._terms)

    def is_exact(self) -> bool:
        return all(a.exact for a in self._terms.values())

    def __bool__(self) -> bool:
        return bool(self._terms)

    def max_norm(self):
        return max((abs(a) for a in self._terms.values()), default=mpmath.mpf(0))

    def is_zero(self, tol: float = FLOAT_ZERO_TOL) -> bool:
        """Exact polys: structurally empty.  Otherwise max coefficient modulus < tol."""
        if not self._terms:
            return True
        if self.is_exact():
            return False
        return self.max_norm() < tol

    def is_constant(self, tol: float = FLOAT_ZERO_TOL) -> bool:
        return (self - ExpPoly.constant(self[0])).is_zero(tol)

    def span(self) -> int:
        if not self._terms:
            return 0
        js = self.exponents()
        return js[-1] - js[0]

    def canonical(self) -> "ExpPoly":
        return ExpPoly(self._terms, self._den)

    def with_den(self, den: int) -> dict[int, CNum]:
        """Exponent map rescaled to the given (multiple) denominator."""
        if den % self._den:
            raise ValueError("target denominator must be a multiple")
        f = den // self._den
        return {j * f: a for j, a in self._terms.items()}

    def __eq__(self, other):
        if not isinstance(other, ExpPoly):
            return NotImplemented
        return self._den == other._den and self._terms == other._terms

    def __hash__(self):
        return hash((self._den, tuple(self._terms.items())))

    def __repr__(self):
        if not self._terms:
            return "ExpPoly(0)"
        parts = []
        for j, a in self._terms.items():
            e = Fraction(j, self._den)
            parts.append(f"({a})" if j == 0 else f"({a})e^({e}z)")
        return "ExpPoly(" + " + ".join(parts) + ")"

    # -- ring operations ----------------------------------------------
    def __add__(self, other):
        return combine(self, _as_exppoly(other), "add")

    __radd__ = __add__

    def __sub__(self, other):
        return combine(self, _as_exppoly(other), "sub")

    def __rsub__(self, other):
        return combine(_as_exppoly(other), self, "sub")

    def __mul__(self, other):
        return combine(self, _as_exppoly(other), "mul")

    __rmul__ = __mul__

    def __neg__(self):
        return ExpPoly({j: -a for j, a in self._terms.items()}, self._den)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not exponential polynomials")
        out = ExpPoly.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def scale(self, c) -> "ExpPoly":
        c = CNum.coerce(c)
        return ExpPoly({j: a * c for j, a in self._terms.items()}, self._den)

    def shift(self, j: int) -> "ExpPoly":
        """Multiply by exp(j z / den)."""
        return ExpPoly({i + j: a for i, a in self._terms.items()}, self._den)

    def differentiate(self) -> "ExpPoly":
        return differentiate(self)

    def map_coeffs(self, fn) -> "ExpPoly":
        return ExpPoly({j: fn(a) for j, a in self._terms.items()}, self._den)

    def to_float(self) -> "ExpPoly":
        return self.map_coeffs(lambda a: a.to_float())

    # -- evaluation ---------------------------------------------------
    def evaluate(self, z) -> mpmath.mpc:
        return evaluate(self, z)

    def evaluate_array(self, z: np.ndarray) -> np.ndarray:
        """Double-precision vectorised evaluation."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for j, a in self._terms.items():
            out = out + complex(a) * np.exp(j * z / self._den)
        return out

    def laurent_roots(self) -> list[tuple[mpmath.mpc, int]]:
        return laurent_roots(self)

    # -- serialization ------------------------------------------------
    def to_json(self) -> dict:
        return {"den": self._den, "terms": [[j, a.to_json()] for j, a in self._terms.items()]}

    @classmethod
    def from_json(cls, obj: dict) -> "ExpPoly":
        return cls({int(j): CNum.from_json(a) for j, a in obj["terms"]}, int(obj.get("den", 1)))


def _as_exppoly(x) -> ExpPoly:
    if isinstance(x, ExpPoly):
        return x
    return ExpPoly.constant(x)


def combine(a: ExpPoly, b: ExpPoly, op: str) -> ExpPoly:
    """Ring operation ``op`` in {"add", "sub", "mul"} on a common exponent lattice."""
    den = a.den * b.den // _gcd(a.den, b.den)
    ta, tb = a.with_den(den), b.with_den(den)
    if op == "add":
        return ExpPoly(list(ta.items()) + list(tb.items()), den)
    if op == "sub":
        return ExpPoly(list(ta.items()) + [(j, -x) for j, x in tb.items()], den)
    if op == "mul":
        out: dict[int, CNum] = {}
        for i, x in ta.items():
            for j, y in tb.items():
                p = x * y
                out[i + j] = out[i + j] + p if i + j in out else p
        return ExpPoly(out, den)
    raise ValueError(f"unknown operation {op!r}")


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def differentiate(a: ExpPoly) -> ExpPoly:
    return ExpPoly({j: x * Fraction(j, a.den) for j, x in a.terms.items()}, a.den)


def evaluate(a: ExpPoly, z) -> mpmath.mpc:
    """Sum of a_j exp(j z / den); raises OverflowError when an exponent is out of range."""
    z = mpmath.mpc(z)
    total = mpmath.mpc(0)
    for j, x in a.terms.items():
        w = j * z / a.den
        if w.real > 1e6:
            raise OverflowError(f"exp({mpmath.nstr(w, 8)}) is out of range")
        total += x.to_mpc() * mpmath.exp(w)
    return total


def laurent_roots(a: ExpPoly, cluster_rtol: float = 1e-8) -> list[tuple[mpmath.mpc, int]]:
    """Nonzero roots zeta of sum_j a_j zeta**j with multiplicities.

    Exact inputs go through an exact squarefree decomposition first, so
    multiplicities are exact.  Float inputs are solved directly and roots
    closer than ``cluster_rtol`` (relative) are merged.
    """
    if not a:
        raise ValueError("roots of the zero exponential polynomial are undefined")
    js = a.exponents()
    lo = js[0]
    coeffs = [a[j] for j in range(lo, js[-1] + 1)]
    if len(coeffs) == 1:
        return []
    if a.is_exact():
        out = []
        for factor, mult in polyutil.squarefree_factors(coeffs):
            out.extend((r, mult) for r in polyutil.numeric_roots(factor))
        return sorted(out, key=_root_key)
    roots = polyutil.numeric_roots(coeffs)
    clusters: list[list] = []
    for r in roots:
        for cl in clusters:
            if abs(r - cl[0]) <= cluster_rtol * max(abs(cl[0]), 1e-300):
                cl.append(r)
                break
        else:
            clusters.append([r])
    out = [(sum(cl) / len(cl), len(cl)) for cl in clusters]
    return sorted(out, key=_root_key)


def _root_key(item):
    r = item[0]
    return (float(abs(r)), float(cmath.phase(complex(r))))
