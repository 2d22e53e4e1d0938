"""Dense univariate polynomials as ascending coefficient lists.

Coefficients may be ``Fraction`` or exact ``CNum``; every routine here only
needs field arithmetic plus a structural zero test.  Numeric root finding
works on any coefficients and runs at the mpmath working precision.
"""
from __future__ import annotations

from fractions import Fraction

import mpmath

from .cnum import CNum


def is_zero(x) -> bool:
    if isinstance(x, CNum):
        return x.is_zero()
    return x == 0


def trim(p: list) -> list:
    p = list(p)
    while p and is_zero(p[-1]):
        p.pop()
    return p


def degree(p: list) -> int:
    p = trim(p)
    return len(p) - 1 if p else -1


def add(p: list, q: list) -> list:
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        a = p[i] if i < len(p) else 0
        b = q[i] if i < len(q) else 0
        out.append(a + b)
    return trim(out)


def neg(p: list) -> list:
    return [-a for a in p]


def sub(p: list, q: list) -> list:
    return add(p, neg(q))


def scale(p: list, c) -> list:
    return trim([a * c for a in p])


def mul(p: list, q: list) -> list:
    p, q = trim(p), trim(q)
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if is_zero(a):
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return trim(out)


def shift(p: list, n: int) -> list:
    """Multiply by x**n (n >= 0)."""
    return trim([0] * n + list(p)) if trim(p) else []


def derivative(p: list) -> list:
    return trim([i * p[i] for i in range(1, len(p))])


def evaluate(p: list, x):
    acc = 0
    for a in reversed(p):
        acc = acc * x + a
    return acc


def divmod_poly(p: list, q: list) -> tuple[list, list]:
    q = trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = trim(p)
    dq = len(q) - 1
    lead = q[-1]
    quot = [0] * max(len(r) - dq, 0)
    while r and len(r) - 1 >= dq:
        k = len(r) - 1 - dq
        coef = r[-1] / lead
        quot[k] = coef
        for i, b in enumerate(q):
            r[i + k] = r[i + k] - coef * b
        r = trim(r[:-1])
    return trim(quot), r


def monic(p: list) -> list:
    p = trim(p)
    if not p:
        return []
    lead = p[-1]
    return [a / lead for a in p]


def gcd(p: list, q: list) -> list:
    a, b = trim(p), trim(q)
    while b:
        _, r = divmod_poly(a, b)
        a, b = b, r
    return monic(a)


def squarefree_factors(p: list) -> list[tuple[list, int]]:
    """Yun's algorithm: ``p = c * prod(f_i ** i)`` with each f_i squarefree and monic."""
    p = monic(p)
    if degree(p) < 1:
        return []
    out = []
    a = gcd(p, derivative(p))
    b, _ = divmod_poly(p, a)
    c, _ = divmod_poly(derivative(p), a)
    d = sub(c, derivative(b))
    i = 1
    while degree(b) >= 1:
        a = gcd(b, d)
        b, _ = divmod_poly(b, a)
        c, _ = divmod_poly(d, a)
        d = sub(c, derivative(b))
        if degree(a) >= 1:
            out.append((monic(a), i))
        i += 1
    return out


def to_mpc_list(p: list) -> list:
    return [x.to_mpc() if isinstance(x, CNum) else mpmath.mpc(mpmath.mpf(x.numerator) / x.denominator)
            if isinstance(x, Fraction) else mpmath.mpc(x) for x in p]


def numeric_roots(p: list, polish_tol: float = 1e-20) -> list:
    """Roots of a polynomial (assumed squarefree) as ``mpmath.mpc`` values.

    Roots are computed by mpmath's Durand-Kerner iteration with extra
    precision and then Newton-polished until ``|p(x)| / sum|p_i||x|^i`` is
    below ``polish_tol``.
    """
    p = trim(p)
    n = len(p) - 1
    if n < 1:
        return []
    coeffs = to_mpc_list(p)
    if n == 1:
        return [-coeffs[0] / coeffs[1]]
    desc = list(reversed(coeffs))
    roots = mpmath.polyroots(desc, maxsteps=400, extraprec=2 * mpmath.mp.prec, error=False)
    dcoeffs = [i * coeffs[i] for i in range(1, len(coeffs))]
    out = []
    for r in roots:
        r = mpmath.mpc(r)
        for _ in range(60):
            val = evaluate(coeffs, r)
            scale_ = sum(abs(c) * abs(r) ** i for i, c in enumerate(coeffs)) or 1
            if abs(val) / scale_ < polish_tol * mpmath.mpf(2) ** (-20):
                break
            dv = evaluate(dcoeffs, r)
            if dv == 0:
                break
            r = r - val / dv
        out.append(r)
    return out


def rational_roots(p: list) -> list[Fraction]:
    """Exact rational roots of a polynomial with rational coefficients.

    Candidates come from the numeric roots and are confirmed by exact
    evaluation, so no rational root is reported unless it is one.
    """
    p = trim(p)
    if degree(p) < 1:
        return []
    found = []
    q = p
    for r in numeric_roots(p):
        if abs(r.imag) > 1e-12 * max(1, abs(r)):
            continue
        guess = Fraction(float(r.real)).limit_denominator(10**6)
        while degree(q) >= 1 and is_zero(evaluate(q, guess)):
            if guess not in found:
                found.append(guess)
            q, _ = divmod_poly(q, [-guess, 1])
    return sorted(found)
