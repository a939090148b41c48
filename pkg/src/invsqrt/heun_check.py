"""Numerical witness for the tri-confluent Heun route to the same solutions.

The tri-confluent Heun equation

    u'' + (gamma + delta z + eps z**2) u' + (alpha z - q) u = 0

is integrated numerically. With gamma = eps = q = 0,
delta = +-2 sqrt(-2 m E) / hbar and alpha = -2 sqrt(2) m V0 / hbar**2, the
composition

    w = exp(gamma z + delta z**2/2 + eps z**3/3) u',
    psi = exp(-(gamma z + delta z**2/2 + eps z**3/3) / 2) w,   z**2 = 2 x,

solves the Schroedinger equation for V0 / sqrt(x). Nothing here feeds back
into the spectrum code.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from . import _ode
from .closed_form import (GridFunction, PhysicalSystem, SolutionCoefficients,
                          eval_psi, spectral_point)
from .errors import DomainError, RangeError, ToleranceError

RK_TOL = 1e-12
RK_MAX_STEPS = 5_000_000
A3_EXCLUDE = 0.05


@dataclass(frozen=True)
class TriConfluentParams:
    gamma_h: float
    delta_h: float
    epsilon_h: float
    alpha_h: float
    q_h: float

    @property
    def z0(self) -> float:
        """Extra singular point of the equation for w."""
        if self.alpha_h == 0:
            raise DomainError("the derivative equation needs alpha != 0")
        return self.q_h / self.alpha_h

    def exponent(self, z):
        """gamma z + delta z**2/2 + eps z**3/3."""
        return self.gamma_h * z + 0.5 * self.delta_h * z ** 2 + self.epsilon_h * z ** 3 / 3.0


@dataclass
class HeunTrajectory:
    zs: np.ndarray
    u: np.ndarray
    u_prime: np.ndarray

    def __post_init__(self):
        self.zs = np.asarray(self.zs, dtype=float)
        self.u = np.asarray(self.u, dtype=float)
        self.u_prime = np.asarray(self.u_prime, dtype=float)
        if not (self.zs.shape == self.u.shape == self.u_prime.shape):
            raise ValueError("trajectory arrays must have equal length")
        if np.any(self.zs < 0) or np.any(np.diff(self.zs) <= 0):
            raise ValueError("trajectory grid must be non-negative and strictly increasing")
        if not (np.all(np.isfinite(self.u)) and np.all(np.isfinite(self.u_prime))):
            raise ValueError("trajectory contains non-finite values")


def heun_params_from_physics(sys: PhysicalSystem, E: float, branch: int = -1) -> TriConfluentParams:
    """Parameters reducing the Heun construction to V0/sqrt(x) at energy E.

    ``branch`` picks the sign of delta; -1 gives the exp(-delta x/2) prefactor.
    """
    if not E < 0:
        raise DomainError(f"E must be negative, got {E}")
    if branch not in (-1, 1):
        raise ValueError("branch must be -1 or +1")
    delta_h = branch * 2.0 * math.sqrt(-2.0 * sys.m * E) / sys.hbar
    alpha_h = -2.0 * math.sqrt(2.0) * sys.m * sys.V0 / sys.hbar ** 2
    return TriConfluentParams(0.0, delta_h, 0.0, alpha_h, 0.0)


def integrate_tch(p: TriConfluentParams, z_grid, init=(1.0, 0.0), tol: float = RK_TOL) -> HeunTrajectory:
    """RK4 with step doubling, reporting the solution at every grid point."""
    zs = np.ascontiguousarray(z_grid, dtype=float)
    if zs.ndim != 1 or zs.size < 2 or zs[0] != 0.0:
        raise ValueError("z_grid must be a 1-d grid starting at 0")
    if np.any(np.diff(zs) <= 0):
        raise ValueError("z_grid must be strictly increasing")
    u, up, status = _ode.rk4_doubling(zs, float(init[0]), float(init[1]), p.gamma_h, p.delta_h,
                                      p.epsilon_h, p.alpha_h, p.q_h, tol, RK_MAX_STEPS)
    if status != 0:
        raise ToleranceError("step-size control failed to meet the local tolerance")
    return HeunTrajectory(zs, u, up)


def u_second(p: TriConfluentParams, traj: HeunTrajectory) -> np.ndarray:
    z = traj.zs
    return (-(p.gamma_h + p.delta_h * z + p.epsilon_h * z * z) * traj.u_prime
            - (p.alpha_h * z - p.q_h) * traj.u)


def reconstruct_psi(p: TriConfluentParams, traj: HeunTrajectory, x_grid) -> GridFunction:
    """psi(x) = exp(exponent(z)/2) u'(z) at z = sqrt(2x), cubic-Hermite interpolated."""
    xs = np.asarray(x_grid, dtype=float)
    if np.any(xs < 0):
        raise DomainError("x must be non-negative")
    z = np.sqrt(2.0 * xs)
    if z.max() > traj.zs[-1] * (1 + 1e-14):
        raise RangeError(f"trajectory ends at z={traj.zs[-1]:.6g}, need {z.max():.6g}")
    spline = CubicHermiteSpline(traj.zs, traj.u_prime, u_second(p, traj))
    values = np.exp(0.5 * p.exponent(z)) * spline(z)
    return GridFunction(xs, values, {"route": "tri-confluent Heun", "delta_h": p.delta_h})


def w_of(p: TriConfluentParams, traj: HeunTrajectory) -> np.ndarray:
    """w = exp(gamma z + delta z**2/2 + eps z**3/3) u'."""
    return np.exp(p.exponent(traj.zs)) * traj.u_prime


def a3_residual(p: TriConfluentParams, traj: HeunTrajectory, exclude: float = A3_EXCLUDE) -> float:
    """Relative residual of w'' - (gamma + delta z + eps z**2 + 1/(z - z0)) w' + alpha (z - z0) w.

    Derivatives are five-point differences on the (uniform) trajectory grid;
    points within ``exclude`` of z0 are skipped.
    """
    z = traj.zs
    h = np.diff(z).mean()
    if np.max(np.abs(np.diff(z) - h)) > 1e-9 * max(1.0, z[-1]):
        raise ValueError("a3_residual needs a uniform trajectory grid")
    w = w_of(p, traj)
    d1 = (-w[4:] + 8.0 * w[3:-1] - 8.0 * w[1:-3] + w[:-4]) / (12.0 * h)
    d2 = (-w[4:] + 16.0 * w[3:-1] - 30.0 * w[2:-2] + 16.0 * w[1:-3] - w[:-4]) / (12.0 * h * h)
    zc = z[2:-2]
    wc = w[2:-2]
    z0 = p.z0
    keep = np.abs(zc - z0) >= exclude
    zc, wc, d1, d2 = zc[keep], wc[keep], d1[keep], d2[keep]
    c1 = p.gamma_h + p.delta_h * zc + p.epsilon_h * zc * zc + 1.0 / (zc - z0)
    c0 = p.alpha_h * (zc - z0)
    res = d2 - c1 * d1 + c0 * wc
    scale = np.max(np.abs(d2) + np.abs(c1 * d1) + np.abs(c0 * wc))
    return float(np.max(np.abs(res)) / scale)


def closed_form_basis(sys: PhysicalSystem, E: float, xs) -> np.ndarray:
    """Columns: the c = (1, 0) and c = (0, 1) closed-form solutions."""
    sp = spectral_point(sys, E)
    cols = [eval_psi(sys, sp, SolutionCoefficients(1.0, 0.0), xs, tail=False),
            eval_psi(sys, sp, SolutionCoefficients(0.0, 1.0), xs, tail=False)]
    return np.column_stack(cols)


def fit_to_basis(values: np.ndarray, basis: np.ndarray) -> tuple[np.ndarray, float]:
    """Least-squares coefficients and max |residual| / max |values|."""
    norms = np.max(np.abs(basis), axis=0)
    coef, *_ = np.linalg.lstsq(basis / norms, values, rcond=None)
    resid = values - (basis / norms) @ coef
    return coef / norms, float(np.max(np.abs(resid)) / np.max(np.abs(values)))


def heun_route(sys: PhysicalSystem, E: float, xs, branch: int = -1, init=(1.0, 0.0),
               dz: float = 0.01) -> GridFunction:
    """psi on ``xs`` obtained by integrating the Heun equation from z = 0.

    The integration grid contains every z = sqrt(2x) requested, so the
    interpolant is exact at the sample points; ``dz`` bounds the gaps.
    """
    xs = np.asarray(xs, dtype=float)
    p = heun_params_from_physics(sys, E, branch)
    z_req = np.sqrt(2.0 * xs)
    n = max(int(math.ceil(z_req.max() / dz)), 4)
    zs = np.union1d(np.linspace(0.0, z_req.max(), n + 1), z_req)
    traj = integrate_tch(p, zs, init)
    return reconstruct_psi(p, traj, xs)


def route_equivalence(sys: PhysicalSystem, E: float, xs, branch: int = -1) -> float:
    """Worst relative fit residual of both Heun-route solutions in the closed-form span."""
    basis = closed_form_basis(sys, E, xs)
    worst = 0.0
    for init in ((1.0, 0.0), (0.0, 1.0)):
        psi = heun_route(sys, E, xs, branch, init).values
        worst = max(worst, fit_to_basis(psi, basis)[1])
    return worst
