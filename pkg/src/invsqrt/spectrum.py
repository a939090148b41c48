"""Bound states vanishing at the origin and at infinity (V0 < 0).

The condition psi(0) = 0 fixes c1/c2; decay at infinity then quantises
``a`` through

    f(a) = sqrt(2a) H_{a-1}(-sqrt(2a)) + H_a(-sqrt(2a)) = 0,

whose roots a_n sit close to ``n - 1/(2 pi)``. Energies follow from
inverting the definition of ``a``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import integrate, optimize

from . import specfun
from .closed_form import (PhysicalSystem, SolutionCoefficients, SpectralPoint,
                          eval_recessive_psi, recessive_tail, spectral_point,
                          switch_point)
from .errors import BracketError, DomainError, PoleError, SingularRatioError

MAX_N = 20
SEED_LO, SEED_HI = 0.45, 0.05  # seed bracket [n - 0.45, n + 0.05]
EXPAND_FACTOR = 1.6
EXPAND_TRIES = 8
QUAD_EPSREL = 1e-10


@dataclass(frozen=True)
class RootBracket:
    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not (0 < self.lo < self.hi):
            raise ValueError("RootBracket needs 0 < lo < hi")
        if np.sign(self.f_lo) * np.sign(self.f_hi) >= 0:
            raise BracketError(f"no sign change on [{self.lo}, {self.hi}]")


def _require_positive(a: float) -> float:
    a = float(a)
    if not a > 0:
        raise DomainError(f"a must be positive, got {a}")
    return a


def coefficient_ratio(a: float) -> float:
    """c1/c2 enforcing psi(0) = 0.

    The ratio is [2a 1F1(1-a/2; 3/2; 2a) + 1F1(-a/2; 1/2; 2a)] divided by
    [sqrt(2a) H_{a-1}(sqrt(2a)) - H_a(sqrt(2a))].
    """
    a = _require_positive(a)
    s = math.sqrt(2.0 * a)
    num = (2.0 * a * specfun.kummer_1f1(1.0 - 0.5 * a, 1.5, 2.0 * a).value
           + specfun.kummer_1f1(-0.5 * a, 0.5, 2.0 * a).value)
    h1 = specfun.hermite_h(a - 1.0, s)
    h0 = specfun.hermite_h(a, s)
    den = s * h1.value - h0.value
    den_err = s * h1.abs_error_estimate + h0.abs_error_estimate
    if abs(den) <= max(8.0 * den_err, 1e-14 * (s * abs(h1.value) + abs(h0.value))):
        raise SingularRatioError(f"denominator of c1/c2 vanishes at a = {a}")
    return num / den


def _spectrum_terms(a: float) -> tuple[float, float]:
    s = math.sqrt(2.0 * a)
    return s * specfun.hermite_h(a - 1.0, -s).value, specfun.hermite_h(a, -s).value


def spectrum_fn(a: float) -> float:
    """f(a) = sqrt(2a) H_{a-1}(-sqrt(2a)) + H_a(-sqrt(2a)); zero at bound states."""
    t1, t2 = _spectrum_terms(_require_positive(a))
    return t1 + t2


def spectrum_fn_scale(a: float) -> float:
    t1, t2 = _spectrum_terms(_require_positive(a))
    return abs(t1) + abs(t2)


def eval_F(a: float) -> float:
    """F = sqrt(2a) H_{a-1}(-sqrt(2a)) / H_a(-sqrt(2a)) + 1."""
    a = _require_positive(a)
    s = math.sqrt(2.0 * a)
    den = specfun.hermite_h(a, -s)
    num = s * specfun.hermite_h(a - 1.0, -s).value
    # below either bound the ratio is rounding noise
    if abs(den.value) <= max(8.0 * den.abs_error_estimate, 1e-13 * abs(num)):
        raise PoleError(f"H_a(-sqrt(2a)) vanishes at a = {a}")
    return num / den.value + 1.0


def approx_root(n: int, refine: bool = False) -> float:
    """Root near n of sin(pi a + 1/2 - a exp(-2a)) = 0.

    Without refinement this is n - 1/(2 pi); with it the fixed point of
    a = n - 1/(2 pi) + a exp(-2a) / pi is iterated to 1e-12.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    a = n - 1.0 / (2.0 * math.pi)
    if not refine:
        return a
    base = a
    for _ in range(200):
        # Newton on g(a) = a - base - a exp(-2a)/pi
        e = math.exp(-2.0 * a)
        g = a - base - a * e / math.pi
        dg = 1.0 - e * (1.0 - 2.0 * a) / math.pi
        step = g / dg
        a -= step
        if abs(step) < 1e-12:
            return a
    raise RuntimeError("approx_root refinement did not converge")  # pragma: no cover


def find_bracket(n: int) -> RootBracket:
    """Sign-change bracket for the n-th root, widened geometrically if needed."""
    lo, hi = n - SEED_LO, n + SEED_HI
    centre = approx_root(n)
    for attempt in range(EXPAND_TRIES + 1):
        lo = max(lo, 1e-3)
        f_lo, f_hi = spectrum_fn(lo), spectrum_fn(hi)
        if np.sign(f_lo) * np.sign(f_hi) < 0:
            return RootBracket(lo, hi, f_lo, f_hi)
        half = EXPAND_FACTOR * 0.5 * (hi - lo)
        lo, hi = centre - half, centre + half
    raise BracketError(f"no sign change of the spectrum function found near n = {n}")


def solve_exact_root(n: int) -> float:
    """a_n, the n-th positive root of the spectrum function."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    br = find_bracket(n)
    return optimize.brentq(spectrum_fn, br.lo, br.hi, xtol=1e-15, rtol=4 * np.finfo(float).eps,
                           maxiter=200)


def energy_from_a(sys: PhysicalSystem, a: float) -> float:
    """Invert a = m**2 V0**2 / (hbar (-2 m E)**1.5) for E."""
    a = _require_positive(a)
    if sys.V0 > 0:
        raise DomainError("bound states require V0 < 0")
    return -(sys.m ** 2 * sys.V0 ** 2 / (sys.hbar * a)) ** (2.0 / 3.0) / (2.0 * sys.m)


def approx_spectrum(sys: PhysicalSystem, n: int) -> float:
    """E_n = (V0/2) (-m V0 / hbar**2)**(1/3) (n - 1/(2 pi))**(-2/3)."""
    if sys.V0 > 0:
        raise DomainError("bound states require V0 < 0")
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    return (0.5 * sys.V0 * (-sys.m * sys.V0 / sys.hbar ** 2) ** (1.0 / 3.0)
            * (n - 1.0 / (2.0 * math.pi)) ** (-2.0 / 3.0))


def relative_energy_error(sys: PhysicalSystem, n: int) -> float:
    """|E_approx - E_exact| / |E_exact| for the n-th level."""
    exact = energy_from_a(sys, solve_exact_root(n))
    return abs(approx_spectrum(sys, n) - exact) / abs(exact)


@dataclass(frozen=True)
class BoundState:
    """A normalised state with psi(0) = 0 (exactly for method='exact') and psi(inf) = 0.

    ``coeffs`` holds (c1, c2) in the c2 = 1 gauge fixed by psi(0) = 0. The
    wavefunction itself is evaluated through the decaying representation,
    which coincides with ``coeffs`` at a root but does not lose accuracy in
    the tail.
    """

    n: int
    a_n: float
    E_n: float
    coeffs: SolutionCoefficients
    norm: float
    method: str
    system: PhysicalSystem

    @cached_property
    def spectral(self) -> SpectralPoint:
        return spectral_point(self.system, self.E_n)

    @property
    def x_switch(self) -> float:
        return switch_point(self.system, self.spectral)

    @property
    def turning_point(self) -> float:
        """Outer classical turning point, V0/sqrt(x) = E."""
        return (self.system.V0 / self.E_n) ** 2

    def psi(self, x):
        """Normalised wavefunction."""
        return self.norm * eval_recessive_psi(self.system, self.spectral, x)


def _tail_square_integral(sys, sp, scale=1.0):
    tail = recessive_tail(sys, sp)
    val, _ = integrate.quad(lambda x: (scale * tail(x)) ** 2, tail.x_s, np.inf,
                            epsabs=0.0, epsrel=QUAD_EPSREL, limit=200)
    return val


def _raw_norm(sys: PhysicalSystem, sp: SpectralPoint) -> float:
    x_s = switch_point(sys, sp)
    x_t = (sys.V0 / sp.E) ** 2
    body, _ = integrate.quad(lambda x: eval_recessive_psi(sys, sp, x) ** 2, 0.0, x_s,
                             points=[min(x_t, 0.5 * x_s)], epsabs=0.0,
                             epsrel=QUAD_EPSREL, limit=400)
    return body + _tail_square_integral(sys, sp)


def bound_state(sys: PhysicalSystem, n: int, method: str = "exact") -> BoundState:
    """Assemble the n-th bound state.

    ``method='exact'`` uses the root of the spectrum function;
    ``method='approx'`` uses a = n - 1/(2 pi), for which psi(0) is small but
    not zero.
    """
    if sys.V0 > 0:
        raise DomainError("bound states require V0 < 0")
    if method == "exact":
        a = solve_exact_root(n)
    elif method == "approx":
        a = approx_root(n)
    else:
        raise ValueError(f"unknown method {method!r}")
    E = energy_from_a(sys, a)
    sp = spectral_point(sys, E)
    coeffs = SolutionCoefficients(coefficient_ratio(a), 1.0)
    norm = 1.0 / math.sqrt(_raw_norm(sys, sp))
    return BoundState(int(n), a, E, coeffs, norm, method, sys)


def overlap(first: BoundState, second: BoundState) -> float:
    """Integral of psi_n psi_m over (0, inf)."""
    x_hi = max(first.x_switch, second.x_switch)
    pts = sorted({min(first.turning_point, x_hi / 2), min(second.turning_point, x_hi / 2)})

    def integrand(x):
        return first.psi(x) * second.psi(x)

    body, _ = integrate.quad(integrand, 0.0, x_hi, points=pts, epsabs=1e-14,
                             epsrel=QUAD_EPSREL, limit=400)
    tail, _ = integrate.quad(integrand, x_hi, np.inf, epsabs=1e-16, limit=200)
    return body + tail


def exact_spectrum(sys: PhysicalSystem, n_max: int = MAX_N) -> list[tuple[int, float, float]]:
    """[(n, a_n, E_n)] for n = 1..n_max."""
    rows = []
    for n in range(1, n_max + 1):
        a = solve_exact_root(n)
        rows.append((n, a, energy_from_a(sys, a)))
    return rows
