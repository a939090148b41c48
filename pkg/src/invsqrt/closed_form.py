"""Closed-form solution of the Schroedinger equation for V(x) = V0 / sqrt(x).

With ``delta = sqrt(-8 m E) / hbar`` and ``a = m**2 V0**2 / (hbar (-2 m E)**1.5)``
the general solution on ``x > 0`` is

    psi(x) = exp(-delta x / 2) du/dy,
    u(y)   = exp(-sqrt(2a) y) [c1 H_a(y) + c2 1F1(-a/2; 1/2; y**2)],
    y      = sgn(V0) sqrt(delta x) + sqrt(2a).

Since ``delta x = (y - sqrt(2a))**2`` on both branches, the exponential
prefactor collapses to ``exp(-(y**2 + 2a)/2)``, which is how it is evaluated
here to avoid overflow of the individual factors.

All evaluators return unnormalised functions in the caller's units.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.polynomial import hermite as npherm

from . import specfun
from .errors import DomainError, PrecisionError, SingularRatioError

# attractive-branch y below which the matched exponential tail takes over
Y_SWITCH = -6.0
# tolerated |residual| / |f| of the tail ansatz at the matching point
TAIL_RESIDUAL_TOL = 0.05


@dataclass(frozen=True)
class PhysicalSystem:
    """Mass, reduced Planck constant and strength of ``V0 / sqrt(x)``."""

    m: float = 1.0
    hbar: float = 1.0
    V0: float = -1.0

    def __post_init__(self):
        if not (self.m > 0 and math.isfinite(self.m)):
            raise DomainError(f"mass must be positive, got {self.m}")
        if not (self.hbar > 0 and math.isfinite(self.hbar)):
            raise DomainError(f"hbar must be positive, got {self.hbar}")
        if self.V0 == 0 or not math.isfinite(self.V0):
            raise DomainError(f"V0 must be finite and nonzero, got {self.V0}")

    @property
    def v0_sign(self) -> int:
        return 1 if self.V0 > 0 else -1

    @property
    def length_scale(self) -> float:
        """Natural length (hbar**2 / (m |V0|))**(2/3)."""
        return (self.hbar ** 2 / (self.m * abs(self.V0))) ** (2.0 / 3.0)

    def potential(self, x):
        return self.V0 / np.sqrt(x)

    def kinetic_factor(self, E, x):
        """f(x) in psi'' = f(x) psi, i.e. (2m/hbar**2)(V(x) - E)."""
        return 2.0 * self.m / self.hbar ** 2 * (self.V0 / np.sqrt(x) - E)


@dataclass(frozen=True)
class SpectralPoint:
    E: float
    delta: float
    a: float

    @property
    def s(self) -> float:
        """sqrt(2a), the shift of y."""
        return math.sqrt(2.0 * self.a)


@dataclass(frozen=True)
class SolutionCoefficients:
    c1: float
    c2: float

    def __post_init__(self):
        if self.c1 == 0 and self.c2 == 0:
            raise DomainError("solution coefficients (c1, c2) must not both vanish")


@dataclass
class GridFunction:
    """Real samples on a strictly increasing, non-negative grid."""

    xs: np.ndarray
    values: np.ndarray
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.xs = np.asarray(self.xs, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.xs.ndim != 1 or self.xs.size < 2:
            raise ValueError("GridFunction needs a 1-d grid with at least 2 points")
        if self.values.shape != self.xs.shape:
            raise ValueError("xs and values must have equal length")
        if np.any(np.diff(self.xs) <= 0):
            raise ValueError("xs must be strictly increasing")
        if not (np.all(np.isfinite(self.xs)) and np.all(np.isfinite(self.values))):
            raise ValueError("GridFunction entries must be finite")


def spectral_point(sys: PhysicalSystem, E: float) -> SpectralPoint:
    E = float(E)
    if not E < 0:
        raise DomainError(f"bound-regime energy must be negative, got E={E}")
    delta = math.sqrt(-8.0 * sys.m * E) / sys.hbar
    a = sys.m ** 2 * sys.V0 ** 2 / (sys.hbar * (-2.0 * sys.m * E) ** 1.5)
    return SpectralPoint(E, delta, a)


def map_y(sp: SpectralPoint, v0_sign: int, x):
    """y = sgn(V0) sqrt(delta x) + sqrt(2a)."""
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0):
        raise DomainError("map_y is defined for x >= 0 only")
    y = v0_sign * np.sqrt(sp.delta * x_arr) + sp.s
    return float(y) if np.ndim(x) == 0 else y


def _h_and_dh(sp: SpectralPoint, c: SolutionCoefficients, y):
    """h = c1 H_a + c2 1F1(-a/2;1/2;y^2) and dh/dy, as arrays."""
    a = sp.a
    y = np.asarray(y, dtype=float)
    h = np.zeros_like(y)
    dh = np.zeros_like(y)
    if c.c1 != 0:
        h += c.c1 * specfun.hermite_array(a, y)
        if a != 0:
            dh += c.c1 * 2.0 * a * specfun.hermite_array(a - 1.0, y)
    if c.c2 != 0:
        y2 = y * y
        h += c.c2 * specfun.kummer_array(-0.5 * a, 0.5, y2)
        dh -= c.c2 * 2.0 * a * y * specfun.kummer_array(1.0 - 0.5 * a, 1.5, y2)
    return h, dh


def eval_u_and_dudy(sp: SpectralPoint, c: SolutionCoefficients, y):
    """u(y) and du/dy of the two-term confluent hypergeometric solution."""
    h, dh = _h_and_dh(sp, c, y)
    pref = np.exp(-sp.s * np.asarray(y, dtype=float))
    u = pref * h
    dudy = pref * (dh - sp.s * h)
    if np.ndim(y) == 0:
        return float(u), float(dudy)
    return u, dudy


def _psi_from_h(sp, y, h, dh):
    return np.exp(-0.5 * (y * y + 2.0 * sp.a)) * (dh - sp.s * h)


def _dpsi_from_h(sys, sp, x, y, h, dh):
    # p = h' - s h;  p' = h'' - s h' with h'' = 2 y h' - 2 a h
    p = dh - sp.s * h
    dp = 2.0 * y * dh - 2.0 * sp.a * h - sp.s * dh
    dydx = sys.v0_sign * math.sqrt(sp.delta) / (2.0 * np.sqrt(x))
    return np.exp(-0.5 * (y * y + 2.0 * sp.a)) * (dp - y * p) * dydx


def switch_point(sys: PhysicalSystem, sp: SpectralPoint) -> float:
    """x beyond which the attractive-branch solution is continued by its tail form."""
    if sys.V0 > 0:
        return math.inf
    return (sp.s - Y_SWITCH) ** 2 / sp.delta


@dataclass(frozen=True)
class TailMatch:
    """psi(x) = psi_s exp(phi(x) - phi(x_s)), phi = -delta x/2 - beta sqrt(x) + sigma log x."""

    x_s: float
    psi_s: float
    delta: float
    beta: float
    sigma: float
    residual: float

    def phi(self, x):
        return -0.5 * self.delta * x - self.beta * np.sqrt(x) + self.sigma * np.log(x)

    def __call__(self, x):
        return self.psi_s * np.exp(self.phi(x) - self.phi(self.x_s))

    def derivative(self, x):
        dphi = -0.5 * self.delta - 0.5 * self.beta / np.sqrt(x) + self.sigma / x
        return self(x) * dphi


def match_tail(sys: PhysicalSystem, sp: SpectralPoint, x_s: float,
               psi_s: float, dpsi_s: float) -> TailMatch:
    """Fit the decaying tail ansatz to value and log-derivative at ``x_s``.

    Raises PrecisionError when the ansatz does not satisfy the ODE at the
    matching point, which is what happens for solutions that grow at infinity.
    """
    if psi_s == 0 or not math.isfinite(psi_s) or not math.isfinite(dpsi_s):
        raise PrecisionError("tail matching needs a finite, nonzero value at the switch point")
    beta = 4.0 * sys.m * sys.V0 / (sys.hbar ** 2 * sp.delta)
    logd = dpsi_s / psi_s
    sigma = x_s * (logd + 0.5 * sp.delta + 0.5 * beta / math.sqrt(x_s))
    d1 = -0.5 * sp.delta - 0.5 * beta / math.sqrt(x_s) + sigma / x_s
    d2 = 0.25 * beta * x_s ** -1.5 - sigma / x_s ** 2
    f = float(sys.kinetic_factor(sp.E, x_s))
    residual = abs(d2 + d1 * d1 - f) / abs(f)
    if not residual <= TAIL_RESIDUAL_TOL:
        raise PrecisionError(
            f"tail continuation rejected at x={x_s:.6g}: residual {residual:.3g} "
            "(solution is not decaying)")
    return TailMatch(float(x_s), float(psi_s), sp.delta, beta, float(sigma), float(residual))


def eval_psi(sys: PhysicalSystem, sp: SpectralPoint, c: SolutionCoefficients, x,
             *, tail: bool = True):
    """psi(x) = exp(-delta x / 2) du/dy for the solution selected by ``c``.

    For attractive potentials the points with ``y < -6`` are taken from the
    matched exponential tail when ``tail`` is true; pass ``tail=False`` to
    sum the series directly (fine for growing solutions).
    """
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x_arr < 0):
        raise DomainError("psi is defined for x >= 0 only")
    out = np.empty_like(x_arr)
    x_s = switch_point(sys, sp) if tail else math.inf
    inner = x_arr <= x_s
    if inner.any():
        y = map_y(sp, sys.v0_sign, x_arr[inner])
        h, dh = _h_and_dh(sp, c, y)
        out[inner] = _psi_from_h(sp, y, h, dh)
    if (~inner).any():
        ys = Y_SWITCH
        h, dh = _h_and_dh(sp, c, np.array([ys]))
        psi_s = _psi_from_h(sp, ys, h, dh)[0]
        dpsi_s = _dpsi_from_h(sys, sp, x_s, ys, h, dh)[0]
        out[~inner] = match_tail(sys, sp, x_s, psi_s, dpsi_s)(x_arr[~inner])
    return float(out[0]) if np.ndim(x) == 0 else out


def eval_psi_and_deriv(sys: PhysicalSystem, sp: SpectralPoint, c: SolutionCoefficients, x):
    """(psi, dpsi/dx) by direct summation, for x > 0 (no tail continuation)."""
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x_arr <= 0):
        raise DomainError("dpsi/dx is singular at x = 0; use x > 0")
    y = map_y(sp, sys.v0_sign, x_arr)
    h, dh = _h_and_dh(sp, c, y)
    psi = _psi_from_h(sp, y, h, dh)
    dpsi = _dpsi_from_h(sys, sp, x_arr, y, h, dh)
    if np.ndim(x) == 0:
        return float(psi[0]), float(dpsi[0])
    return psi, dpsi


def recessive_coefficients(a: float) -> SolutionCoefficients:
    """(c1, c2) with c2 = 1 for the solution decaying as x -> infinity.

    That solution is u = exp(-sqrt(2a) y) H_a(-y) / (2 A) with
    A = 2**a sqrt(pi) / Gamma((1 - a)/2), since H_a(-y) = -H_a(y) + 2 A 1F1(-a/2; 1/2; y**2).
    """
    log_abs, sign = specfun.log_gamma_real(0.5 * (1.0 - a))
    if sign == 0:
        raise SingularRatioError(f"no c2 = 1 gauge for the decaying solution at a = {a}")
    # -1 / (2A) = -Gamma((1-a)/2) / (2**(a+1) sqrt(pi))
    c1 = -sign * math.exp(log_abs - (a + 1.0) * math.log(2.0) - 0.5 * math.log(math.pi))
    return SolutionCoefficients(c1, 1.0)


def _recessive_h(sp, y):
    a = sp.a
    log_abs, sign = specfun.log_gamma_real(0.5 * (1.0 - a))
    if sign == 0:
        raise SingularRatioError(f"no c2 = 1 gauge for the decaying solution at a = {a}")
    k = sign * math.exp(log_abs - (a + 1.0) * math.log(2.0) - 0.5 * math.log(math.pi))
    h = k * specfun.hermite_array(a, -y)
    dh = -k * 2.0 * a * specfun.hermite_array(a - 1.0, -y)
    return h, dh


def eval_recessive_psi(sys: PhysicalSystem, sp: SpectralPoint, x, *, tail: bool = True):
    """The solution decaying at infinity, in the gauge of ``recessive_coefficients``.

    Evaluated through H_a(-y) rather than through the (c1, c2) combination,
    whose two terms each grow like exp(y**2) and cancel.
    """
    if sys.V0 > 0:
        raise DomainError("the decaying solution is only built for V0 < 0")
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x_arr < 0):
        raise DomainError("psi is defined for x >= 0 only")
    out = np.empty_like(x_arr)
    x_s = switch_point(sys, sp) if tail else math.inf
    inner = x_arr <= x_s
    if inner.any():
        y = map_y(sp, sys.v0_sign, x_arr[inner])
        h, dh = _recessive_h(sp, y)
        out[inner] = _psi_from_h(sp, y, h, dh)
    if (~inner).any():
        out[~inner] = recessive_tail(sys, sp)(x_arr[~inner])
    return float(out[0]) if np.ndim(x) == 0 else out


def recessive_tail(sys: PhysicalSystem, sp: SpectralPoint) -> TailMatch:
    x_s = switch_point(sys, sp)
    ys = np.array([Y_SWITCH])
    h, dh = _recessive_h(sp, ys)
    psi_s = _psi_from_h(sp, ys, h, dh)[0]
    dpsi_s = _dpsi_from_h(sys, sp, x_s, ys, h, dh)[0]
    return match_tail(sys, sp, x_s, psi_s, dpsi_s)


def quasipoly_energy(sys: PhysicalSystem, n: int) -> float:
    """E_n = (V0/2) (-m V0 / hbar**2)**(1/3) n**(-2/3)."""
    if sys.V0 > 0:
        raise DomainError("quasi-polynomial bound states need an attractive potential (V0 < 0)")
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    return 0.5 * sys.V0 * (-sys.m * sys.V0 / sys.hbar ** 2) ** (1.0 / 3.0) * n ** (-2.0 / 3.0)


def _quasipoly_y(sys, n, x):
    sp = spectral_point(sys, quasipoly_energy(sys, n))
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0):
        raise DomainError("psi is defined for x >= 0 only")
    return math.sqrt(2.0 * n) - np.sqrt(sp.delta * x_arr)


def quasipoly_psi(sys: PhysicalSystem, n: int, x):
    """exp(-sqrt(2n) y - delta x/2) (H_n(y) - sqrt(2n) H_{n-1}(y)), y = sqrt(2n) - sqrt(delta x)."""
    y = _quasipoly_y(sys, n, x)
    hn = npherm.hermval(y, [0.0] * n + [1.0])
    hn1 = npherm.hermval(y, [0.0] * (n - 1) + [1.0])
    out = np.exp(-0.5 * (y * y + 2.0 * n)) * (hn - math.sqrt(2.0 * n) * hn1)
    return float(out) if np.ndim(x) == 0 else out


# polynomial factors of the n = 1, 2, 3 states, ascending powers of y
_EXPLICIT = {
    1: (1.0, -math.sqrt(2.0)),
    2: (1.0, 2.0, -2.0),
    3: (3.0, -3.0 * math.sqrt(6.0), -6.0, 2.0 * math.sqrt(6.0)),
}


def quasipoly_explicit(sys: PhysicalSystem, n: int, x):
    """The first three quasi-polynomial states written out as explicit polynomials."""
    if n not in _EXPLICIT:
        raise DomainError("explicit quasi-polynomials are tabulated for n = 1, 2, 3")
    sp = spectral_point(sys, quasipoly_energy(sys, n))
    y = _quasipoly_y(sys, n, x)
    poly = np.polynomial.polynomial.polyval(y, _EXPLICIT[n])
    out = np.exp(-math.sqrt(2.0 * n) * y - 0.5 * sp.delta * np.asarray(x, dtype=float)) * poly
    return float(out) if np.ndim(x) == 0 else out
