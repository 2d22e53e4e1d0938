"""Complex scalars with an exact (Gaussian rational) or a multiprecision backend.

Exact values are pairs of :class:`fractions.Fraction`.  Float values are
``mpmath.mpc`` numbers at the working precision of the global mpmath context
(see :func:`set_precision`).  Mixing the two promotes to float.
"""
from __future__ import annotations

from fractions import Fraction
from math import isqrt
from numbers import Number

import mpmath

DEFAULT_PRECISION = 113

if mpmath.mp.prec < DEFAULT_PRECISION:
    mpmath.mp.prec = DEFAULT_PRECISION


def set_precision(bits: int) -> None:
    if bits < 53:
        raise ValueError("precision must be at least 53 bits")
    mpmath.mp.prec = bits


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"``, an integer or a decimal literal into an exact Fraction."""
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


class CNum:
    __slots__ = ("_re", "_im", "_mp")

    def __init__(self, re=0, im=0):
        if isinstance(re, (mpmath.mpf, mpmath.mpc, float, complex)) or isinstance(
            im, (mpmath.mpf, mpmath.mpc, float, complex)
        ):
            self._re = self._im = None
            self._mp = mpmath.mpc(re) + mpmath.mpc(0, 1) * mpmath.mpc(im)
        else:
            self._re = Fraction(re)
            self._im = Fraction(im)
            self._mp = None

    # -- construction -------------------------------------------------
    @classmethod
    def coerce(cls, value) -> "CNum":
        if isinstance(value, CNum):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        if isinstance(value, str):
            return cls(parse_rational(value))
        if isinstance(value, (float, mpmath.mpf)):
            return cls(mpmath.mpf(value))
        if isinstance(value, (complex, mpmath.mpc)):
            return cls(mpmath.mpc(value))
        if isinstance(value, Number):
            return cls(mpmath.mpc(complex(value)))
        raise TypeError(f"cannot convert {type(value).__name__} to CNum")

    @classmethod
    def from_mpc(cls, z) -> "CNum":
        obj = cls.__new__(cls)
        obj._re = obj._im = None
        obj._mp = mpmath.mpc(z)
        return obj

    # -- inspection ---------------------------------------------------
    @property
    def exact(self) -> bool:
        return self._mp is None

    @property
    def real(self):
        return self._re if self._mp is None else self._mp.real

    @property
    def imag(self):
        return self._im if self._mp is None else self._mp.imag

    def to_mpc(self) -> mpmath.mpc:
        if self._mp is not None:
            return self._mp
        return mpmath.mpc(mpmath.mpf(self._re.numerator) / self._re.denominator,
                          mpmath.mpf(self._im.numerator) / self._im.denominator)

    def __complex__(self) -> complex:
        return complex(self.to_mpc())

    def to_float(self) -> "CNum":
        return CNum.from_mpc(self.to_mpc())

    def is_zero(self, tol: float | None = None) -> bool:
        """Structural zero test for exact values; ``|x| < tol`` for floats."""
        if self._mp is None:
            return self._re == 0 and self._im == 0
        if tol is None:
            return self._mp == 0
        return abs(self._mp) < tol

    def __abs__(self):
        return abs(self.to_mpc())

    def is_real(self) -> bool:
        return self.exact and self._im == 0

    def as_fraction(self) -> Fraction:
        if not self.is_real():
            raise ValueError(f"{self} is not an exact real")
        return self._re

    def as_integer(self, tol: float = 1e-20) -> int | None:
        """Return the value as a Python int if it is one (exactly or within tol)."""
        if self.exact:
            if self._im == 0 and self._re.denominator == 1:
                return int(self._re)
            return None
        z = self._mp
        n = int(mpmath.nint(z.real))
        if abs(z - n) < tol:
            return n
        return None

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        try:
            o = CNum.coerce(other)
        except TypeError:
            return NotImplemented
        if self.exact and o.exact:
            return CNum(self._re + o._re, self._im + o._im)
        return CNum.from_mpc(self.to_mpc() + o.to_mpc())

    __radd__ = __add__

    def __neg__(self):
        if self.exact:
            return CNum(-self._re, -self._im)
        return CNum.from_mpc(-self._mp)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            o = CNum.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return CNum.coerce(other) - self

    def __mul__(self, other):
        try:
            o = CNum.coerce(other)
        except TypeError:
            return NotImplemented
        if self.exact and o.exact:
            a, b, c, d = self._re, self._im, o._re, o._im
            if b == 0 and d == 0:
                return CNum(a * c)
            return CNum(a * c - b * d, a * d + b * c)
        return CNum.from_mpc(self.to_mpc() * o.to_mpc())

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = CNum.coerce(other)
        except TypeError:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("CNum division by zero")
        if self.exact and o.exact:
            a, b, c, d = self._re, self._im, o._re, o._im
            if d == 0:
                return CNum(a / c, b / c)
            n = c * c + d * d
            return CNum((a * c + b * d) / n, (b * c - a * d) / n)
        return CNum.from_mpc(self.to_mpc() / o.to_mpc())

    def __rtruediv__(self, other):
        return CNum.coerce(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return CNum(1) / (self ** (-n))
        result = CNum(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "CNum":
        if self.exact:
            return CNum(self._re, -self._im)
        return CNum.from_mpc(mpmath.conj(self._mp))

    # -- comparison ---------------------------------------------------
    def __eq__(self, other):
        try:
            o = CNum.coerce(other)
        except TypeError:
            return NotImplemented
        if self.exact and o.exact:
            return self._re == o._re and self._im == o._im
        return self.to_mpc() == o.to_mpc()

    def __hash__(self):
        if self.exact:
            return hash((self._re, self._im))
        return hash(complex(self._mp))

    def __repr__(self):
        return f"CNum({self})"

    def __str__(self):
        if self.exact:
            if self._im == 0:
                return str(self._re)
            if self._re == 0:
                return f"{self._im}i"
            sign = "+" if self._im > 0 else "-"
            return f"{self._re}{sign}{abs(self._im)}i"
        return mpmath.nstr(self._mp, 20)

    # -- serialization ------------------------------------------------
    def to_json(self) -> dict:
        if self.exact:
            return {"exact": _frac_str(self._re), "exact_im": _frac_str(self._im)}
        # decimal strings keep the full working precision; JSON numbers would not
        digits = int(mpmath.mp.prec * 0.30103) + 3
        return {"float": [mpmath.nstr(self._mp.real, digits), mpmath.nstr(self._mp.imag, digits)]}

    @classmethod
    def from_json(cls, obj) -> "CNum":
        if isinstance(obj, (int, str)):
            return cls.coerce(obj)
        if "exact" in obj:
            return cls(parse_rational(str(obj["exact"])), parse_rational(str(obj.get("exact_im", "0"))))
        if "float" in obj:
            re, im = obj["float"]
            return cls.from_mpc(mpmath.mpc(mpmath.mpf(re), mpmath.mpf(im)))
        raise ValueError(f"unrecognised number encoding: {obj!r}")


def _frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


ZERO = CNum(0)
ONE = CNum(1)
I = CNum(0, 1)


def _exact_rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    p, r = q.numerator, q.denominator
    sp, sr = isqrt(p), isqrt(r)
    if sp * sp == p and sr * sr == r:
        return Fraction(sp, sr)
    return None


def csqrt(x) -> CNum:
    """Principal square root; exact when ``x`` is an exact perfect square."""
    x = CNum.coerce(x)
    if x.exact:
        a, b = x.real, x.imag
        if b == 0:
            if a >= 0:
                r = _exact_rational_sqrt(a)
                if r is not None:
                    return CNum(r)
            else:
                r = _exact_rational_sqrt(-a)
                if r is not None:
                    return CNum(0, r)
        else:
            modulus = _exact_rational_sqrt(a * a + b * b)
            if modulus is not None:
                u = _exact_rational_sqrt((modulus + a) / 2)
                v = _exact_rational_sqrt((modulus - a) / 2)
                if u is not None and v is not None:
                    return CNum(u, v if b > 0 else -v)
    return CNum.from_mpc(mpmath.sqrt(x.to_mpc()))


def sqrt_branches(x) -> list[CNum]:
    """Both square roots, principal one first; a single entry for zero."""
    r = csqrt(x)
    if r.is_zero():
        return [r]
    return [r, -r]
