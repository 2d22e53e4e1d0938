"""Truncated power series sum_{i<=N} c_i x^i over CNum.

Every operation keeps the result exact through the smallest order at which
its inputs are known, so ``N`` always means "coefficients 0..N are right".
"""
from __future__ import annotations

from typing import Iterable

import mpmath

from .cnum import CNum


class PowerSeries:
    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable, N: int | None = None):
        c = [CNum.coerce(a) for a in coeffs]
        if N is not None:
            if N < 0:
                raise ValueError("truncation order must be nonnegative")
            c = (c + [CNum(0)] * (N + 1 - len(c)))[: N + 1]
        if not c:
            raise ValueError("a power series needs at least one coefficient")
        self._c = tuple(c)

    @classmethod
    def zero(cls, N: int) -> "PowerSeries":
        return cls([], N)

    @classmethod
    def one(cls, N: int) -> "PowerSeries":
        return cls([1], N)

    @classmethod
    def x(cls, N: int) -> "PowerSeries":
        return cls([0, 1], N)

    @property
    def N(self) -> int:
        return len(self._c) - 1

    @property
    def coeffs(self) -> tuple[CNum, ...]:
        return self._c

    def __getitem__(self, i: int) -> CNum:
        if i < 0:
            return CNum(0)
        if i > self.N:
            raise IndexError(f"order {i} is beyond the truncation N = {self.N}")
        return self._c[i]

    def __len__(self) -> int:
        return len(self._c)

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(self._c)

    def __repr__(self):
        return f"PowerSeries({[str(a) for a in self._c]})"

    def truncate(self, N: int) -> "PowerSeries":
        if N > self.N:
            raise ValueError(f"cannot extend a series known through {self.N} to {N}")
        return PowerSeries(self._c[: N + 1])

    def order(self) -> int | None:
        """Index of the first nonzero coefficient, None when all vanish."""
        for i, a in enumerate(self._c):
            if not a.is_zero():
                return i
        return None

    def is_exact(self) -> bool:
        return all(a.exact for a in self._c)

    def max_norm(self):
        return max(abs(a) for a in self._c)

    # -- arithmetic ---------------------------------------------------
    def _pair(self, other):
        if not isinstance(other, PowerSeries):
            other = PowerSeries([other], self.N)
        n = min(self.N, other.N)
        return self._c[: n + 1], other._c[: n + 1]

    def __add__(self, other):
        a, b = self._pair(other)
        return PowerSeries([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._pair(other)
        return PowerSeries([x - y for x, y in zip(a, b)])

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return PowerSeries([-a for a in self._c])

    def __mul__(self, other):
        if not isinstance(other, PowerSeries):
            c = CNum.coerce(other)
            return PowerSeries([a * c for a in self._c])
        a, b = self._pair(other)
        out = []
        for n in range(len(a)):
            acc = CNum(0)
            for i in range(n + 1):
                if not a[i].is_zero() and not b[n - i].is_zero():
                    acc = acc + a[i] * b[n - i]
            out.append(acc)
        return PowerSeries(out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "PowerSeries":
        """Multiply by x^k (k >= 0); the known order grows by k."""
        if k < 0:
            raise ValueError("negative shifts leave the power-series ring")
        return PowerSeries([CNum(0)] * k + list(self._c))

    def differentiate(self) -> "PowerSeries":
        if self.N == 0:
            raise ValueError("derivative of a series known only at order 0 is unknown")
        return PowerSeries([a * i for i, a in enumerate(self._c) if i >= 1])

    def inverse(self) -> "PowerSeries":
        a0 = self._c[0]
        if a0.is_zero():
            raise ZeroDivisionError("series with zero constant term has no inverse")
        inv = [1 / a0]
        for n in range(1, len(self._c)):
            acc = CNum(0)
            for i in range(1, n + 1):
                acc = acc + self._c[i] * inv[n - i]
            inv.append(-acc / a0)
        return PowerSeries(inv)

    def __truediv__(self, other):
        if isinstance(other, PowerSeries):
            return self * other.inverse()
        return self * (1 / CNum.coerce(other))

    def exp(self) -> "PowerSeries":
        """exp of a series with zero constant term (n E_n = sum k S_k E_{n-k})."""
        if not self._c[0].is_zero():
            raise ValueError("series exp needs a zero constant term")
        E = [CNum(1)]
        for n in range(1, len(self._c)):
            acc = CNum(0)
            for k in range(1, n + 1):
                if not self._c[k].is_zero():
                    acc = acc + self._c[k] * k * E[n - k]
            E.append(acc / n)
        return PowerSeries(E)

    def log(self) -> "PowerSeries":
        """log of a series with constant term 1."""
        if self._c[0] != CNum(1):
            raise ValueError("series log needs constant term 1")
        L = [CNum(0)]
        for n in range(1, len(self._c)):
            acc = self._c[n] * n
            for k in range(1, n):
                acc = acc - L[k] * k * self._c[n - k]
            L.append(acc / n)
        return PowerSeries(L)

    def evaluate(self, x) -> mpmath.mpc:
        x = mpmath.mpc(x)
        total = mpmath.mpc(0)
        for a in reversed(self._c):
            total = total * x + a.to_mpc()
        return total

    def tail_estimate(self, x) -> mpmath.mpf:
        """Size of the last two retained terms at x (last-term heuristic)."""
        r = abs(mpmath.mpc(x))
        n = self.N
        out = abs(self._c[n].to_mpc()) * r ** n
        if n >= 1:
            out = max(out, abs(self._c[n - 1].to_mpc()) * r ** (n - 1))
        return out

    def to_json(self) -> list:
        return [a.to_json() for a in self._c]

    @classmethod
    def from_json(cls, obj: list) -> "PowerSeries":
        return cls([CNum.from_json(a) for a in obj])
