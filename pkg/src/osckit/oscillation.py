"""Zero lattices, zero counting, lambda estimates, sector signs and ray integration."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np
from scipy.integrate import solve_ivp

from .solution import EqSpec, SolutionForm

BOUNDARY_EPS = 1e-9


class ContourError(ValueError):
    """A zero sits on (or too close to) the integration contour, or quadrature did not settle."""


class StiffnessError(RuntimeError):
    """The ray integrator could not keep the local error below tolerance."""


# ---------------------------------------------------------------------------
# zero lattices


@dataclass(frozen=True)
class ZeroLattice:
    """Zeros base + i*period*m, m in Z, for every (base, multiplicity) entry."""

    entries: tuple[tuple[complex, int], ...]
    den: int = 1

    @property
    def period(self) -> float:
        return 2 * math.pi * self.den

    @property
    def empty(self) -> bool:
        return not self.entries

    def multiplicity_per_strip(self) -> int:
        return sum(m for _, m in self.entries)

    def points(self, m_range: range) -> list[tuple[complex, int]]:
        return [(b + 1j * self.period * m, mult) for b, mult in self.entries for m in m_range]

    def to_json(self) -> dict:
        return {
            "den": self.den,
            "period": self.period,
            "entries": [{"base": [b.real, b.imag], "multiplicity": m} for b, m in self.entries],
        }


def zeros_of(sol: SolutionForm) -> ZeroLattice:
    """Zeros of f = kappa e^h are those of kappa, a polynomial in zeta = e^{z/den}."""
    kappa = sol.kappa
    if kappa.is_constant():
        return ZeroLattice((), kappa.den)
    entries = []
    for root, mult in kappa.laurent_roots():
        base = kappa.den * mpmath.log(root)
        entries.append((complex(base), int(mult)))
    return ZeroLattice(tuple(entries), kappa.den)


def _count_entry(base: complex, period: float, r: float) -> int:
    x, y = base.real, base.imag
    if x * x >= r * r:
        return 0
    w = math.sqrt(r * r - x * x)
    lo = math.floor((-w - y) / period) + 1
    hi = math.ceil((w - y) / period) - 1
    return max(0, hi - lo + 1)


def _on_circle(lat: ZeroLattice, r: float, eps: float) -> bool:
    for base, _ in lat.entries:
        x, y = base.real, base.imag
        if x * x > (r + eps) ** 2:
            continue
        w = math.sqrt(max(r * r - x * x, 0.0))
        for target in (w, -w):
            m = round((target - y) / lat.period)
            if abs(abs(complex(x, y + lat.period * m)) - r) <= eps:
                return True
    return False


def count_zeros(lat: ZeroLattice, r: float) -> int:
    """n(r): zeros with |z| < r, counted with multiplicity."""
    if r <= 0:
        raise ValueError("r must be positive")
    if _on_circle(lat, r, BOUNDARY_EPS):
        r = r + BOUNDARY_EPS
    return sum(mult * _count_entry(b, lat.period, r) for b, mult in lat.entries)


def lambda_estimate(lat: ZeroLattice, r_values) -> float:
    """Least-squares slope of log n(r) against log r over the larger half of r_values."""
    r_values = [float(r) for r in r_values]
    if len(r_values) < 4:
        raise ValueError("need at least four radii")
    if any(b <= a for a, b in zip(r_values, r_values[1:])):
        raise ValueError("radii must be strictly increasing")
    if lat.empty:
        return 0.0
    upper = r_values[len(r_values) // 2:]
    pts = [(math.log(r), math.log(n)) for r in upper if (n := count_zeros(lat, r)) > 0]
    if len(pts) < 2:
        return 0.0
    xs, ys = np.array(pts).T
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)


def argument_count(sol: SolutionForm, r: float, n_quad: int = 4096, max_nodes: int = 1 << 20) -> int:
    """(1/2 pi i) of the contour integral of f'/f over |z| = r, by the trapezoid rule.

    f'/f = kappa'/kappa + g and g is entire, so only kappa'/kappa contributes;
    dropping g avoids cancelling e^{lz}-sized terms in double precision.
    Nodes are doubled until two successive rounded counts agree.
    """
    if r <= 0:
        raise ValueError("r must be positive")
    if _on_circle(zeros_of(sol), r, 1e-6):
        raise ContourError(f"a zero of f lies within 1e-6 of |z| = {r}")
    kappa, dk = sol.kappa, sol.kappa.differentiate()

    def value(n: int) -> float:
        z = r * np.exp(2j * np.pi * np.arange(n) / n)
        with np.errstate(over="raise", invalid="raise"):
            q = dk.evaluate_array(z) / kappa.evaluate_array(z)
        return complex(np.mean(q * z))

    n = n_quad
    prev = None
    while n <= max_nodes:
        v = value(n)
        near = round(v.real)
        if abs(v - near) <= 0.1 and prev == near:
            return int(near)
        prev = near if abs(v - near) <= 0.1 else None
        n *= 2
    raise ContourError(f"quadrature did not settle on an integer by {max_nodes} nodes (last {v})")


def count_table(lat: ZeroLattice, r_values) -> list[tuple[float, int]]:
    return [(float(r), count_zeros(lat, float(r))) for r in r_values]


# ---------------------------------------------------------------------------
# sector decomposition of delta(p, theta) = a cos k theta - b sin k theta


@dataclass(frozen=True)
class SectorDecomp:
    a: float
    b: float
    k: int
    theta_list: tuple[float, ...]
    signs: tuple[int, ...]

    def delta(self, theta: float) -> float:
        return delta(self.a, self.b, self.k, theta)

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "k": self.k, "theta": list(self.theta_list), "signs": list(self.signs)}


def delta(a: float, b: float, k: int, theta: float) -> float:
    return a * math.cos(k * theta) - b * math.sin(k * theta)


def delta_sectors(a: float, b: float, k: int, theta1: float | None = None) -> SectorDecomp:
    """Boundaries theta_j = theta1 + (j-1) pi/k and the sign of delta on each sector.

    The default theta1 puts delta > 0 on the odd sectors S_1, S_3, ...
    """
    if a == 0 and b == 0:
        raise ValueError("(a, b) must not both vanish")
    if k < 1:
        raise ValueError("k must be at least 1")
    amp = math.hypot(a, b)
    if theta1 is None:
        theta1 = (-math.pi / 2 - math.atan2(b, a)) / k
    elif abs(delta(a, b, k, theta1)) > 1e-9 * amp:
        raise ValueError(f"delta does not vanish at theta1 = {theta1}")
    step = math.pi / k
    thetas = tuple(theta1 + j * step for j in range(2 * k))
    signs = tuple(1 if delta(a, b, k, t + step / 2) > 0 else -1 for t in thetas)
    return SectorDecomp(a, b, k, thetas, signs)


# ---------------------------------------------------------------------------
# integration along rays


@dataclass
class RaySamples:
    theta: float
    r: np.ndarray
    f: np.ndarray
    fp: np.ndarray
    method: str
    notes: list[str] = field(default_factory=list)

    def z(self) -> np.ndarray:
        return self.r * np.exp(1j * self.theta)

    def to_json(self) -> dict:
        return {
            "theta": self.theta,
            "method": self.method,
            "samples": [
                {"r": float(r), "f": [float(f.real), float(f.imag)], "fp": [float(d.real), float(d.imag)]}
                for r, f, d in zip(self.r, self.f, self.fp)
            ],
            "notes": list(self.notes),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "abs_f", "re_f", "im_f"])
        for r, f in zip(self.r, self.f):
            w.writerow([repr(float(r)), repr(abs(complex(f))), repr(complex(f).real), repr(complex(f).imag)])
        return buf.getvalue()


def _coefficient_fn(spec: EqSpec):
    b2, b3 = complex(spec.b2), complex(spec.b3)
    l, s = spec.l, spec.s

    def A(z):
        return np.exp(l * z) + b2 * np.exp(s * z) + b3

    return A


def ray_integrate(spec: EqSpec | None, theta: float, r_max: float, f0, f0p, rtol: float = 1e-10,
                  atol: float = 1e-14, n_samples: int = 201, method: str = "DOP853",
                  coefficient=None) -> RaySamples:
    """Integrate f'' = A(z) f along z = r e^{i theta}, 0 <= r <= r_max.

    ``coefficient`` (a vectorised z -> A(z)) overrides the one built from
    ``spec``; it lets degenerate coefficients such as a constant be checked.

    ``method`` is "DOP853" (scipy, double precision) or "taylor" (mpmath's
    Taylor-series integrator at the working precision, for rays where the
    wanted solution is swamped by a growing one in double precision).
    """
    if r_max <= 0:
        raise ValueError("r_max must be positive")
    rs = np.linspace(0.0, float(r_max), int(n_samples))
    u = complex(math.cos(theta), math.sin(theta))
    if method == "taylor":
        if spec is None:
            raise ValueError("the taylor method needs an EqSpec")
        return _ray_taylor(spec, theta, rs, complex(f0), complex(f0p))
    A = coefficient if coefficient is not None else _coefficient_fn(spec)

    def rhs(r, y):
        z = r * u
        return np.array([u * y[1], u * A(z) * y[0]])

    sol = solve_ivp(rhs, (0.0, float(r_max)), np.array([complex(f0), complex(f0p)]), method=method,
                    t_eval=rs, rtol=rtol, atol=atol)
    if sol.status != 0:
        raise StiffnessError(f"integration stopped at r = {sol.t[-1] if len(sol.t) else 0}: {sol.message}")
    return RaySamples(theta, sol.t, sol.y[0], sol.y[1], method)


def _ray_taylor(spec: EqSpec, theta: float, rs: np.ndarray, f0: complex, f0p: complex) -> RaySamples:
    u = mpmath.expj(theta)
    l, s = spec.l, spec.s
    b2, b3 = spec.b2.to_mpc(), spec.b3.to_mpc()

    def rhs(r, y):
        z = r * u
        A = mpmath.exp(l * z) + b2 * mpmath.exp(s * z) + b3
        return [u * y[1], u * A * y[0]]

    sol = mpmath.odefun(rhs, 0, [mpmath.mpc(f0), mpmath.mpc(f0p)])
    fs, fps = [], []
    for r in rs:
        y = sol(mpmath.mpf(float(r)))
        fs.append(complex(y[0]))
        fps.append(complex(y[1]))
    return RaySamples(theta, rs, np.array(fs), np.array(fps), "taylor")


def ray_from_solution(sol: SolutionForm, theta: float, r_max: float, **kw) -> RaySamples:
    """Ray integration with initial data f(0), f'(0) taken from a closed form."""
    return ray_integrate(sol.spec, theta, r_max, complex(sol.f(0)), complex(sol.fprime(0)), **kw)


def closed_form_on_ray(sol: SolutionForm, samples: RaySamples) -> np.ndarray:
    return np.array([complex(sol.f(complex(z))) for z in samples.z()])


def relative_error(sol: SolutionForm, samples: RaySamples, lo: float = 1e-8, hi: float = 1e8) -> float:
    """Max relative error against the closed form where |f| lies in [lo, hi]."""
    exact = closed_form_on_ray(sol, samples)
    mask = (np.abs(exact) >= lo) & (np.abs(exact) <= hi)
    if not mask.any():
        return 0.0
    return float(np.max(np.abs(samples.f[mask] - exact[mask]) / np.abs(exact[mask])))


def growth_ratio(samples: RaySamples) -> float:
    """sup |f(r e^{i theta})| / (1 + r) over the samples."""
    return float(np.max(np.abs(samples.f) / (1 + samples.r)))


def counts_to_csv(table) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["r", "n"])
    for r, n in table:
        w.writerow([repr(float(r)), n])
    return buf.getvalue()


__all__ = [
    "ContourError",
    "RaySamples",
    "SectorDecomp",
    "StiffnessError",
    "ZeroLattice",
    "argument_count",
    "closed_form_on_ray",
    "count_table",
    "count_zeros",
    "counts_to_csv",
    "delta",
    "delta_sectors",
    "growth_ratio",
    "lambda_estimate",
    "ray_from_solution",
    "ray_integrate",
    "relative_error",
    "zeros_of",
]
