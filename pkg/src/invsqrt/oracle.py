"""Checks that do not rely on the closed-form solution being right.

* ``residual_check`` plugs any candidate psi into the Schroedinger equation
  with a five-point second-difference stencil.
* ``numerov_eigenvalue`` finds bound-state energies by outward Numerov
  shooting from a Frobenius start, bisecting on the sign of psi(x_max).
* ``wronskian_scan`` tracks the Wronskian of the two closed-form basis
  solutions, which must be constant because the equation has no
  first-derivative term.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _ode
from .closed_form import (GridFunction, PhysicalSystem, SolutionCoefficients,
                          eval_psi_and_deriv, spectral_point)
from .errors import BracketError, ConvergenceError, DomainError, GridError

# stencil truncation guard: h * sqrt(max|f|) must not exceed this
MAX_PHASE_STEP = 0.2


@dataclass(frozen=True)
class ShootingConfig:
    x0: float
    x_max: float
    steps: int
    E_bracket: tuple[float, float]
    tol_E: float = 1e-13

    def __post_init__(self):
        lo, hi = self.E_bracket
        if not 0 < self.x0 < self.x_max:
            raise ValueError("ShootingConfig needs 0 < x0 < x_max")
        if not lo < hi < 0:
            raise ValueError("ShootingConfig needs E_lo < E_hi < 0")
        if self.steps < 1000:
            raise ValueError("ShootingConfig needs at least 1000 steps")
        if not self.tol_E > 0:
            raise ValueError("tol_E must be positive")

    @property
    def h(self) -> float:
        return (self.x_max - self.x0) / self.steps


def level_bracket(sys: PhysicalSystem, n: int, width: float = 0.4) -> tuple[float, float]:
    """Energy interval around the n-th level from the crude a ~ n - 1/(2 pi) estimate.

    Only the rough location is used, so the shooting result stays independent
    of the Hermite-function root finder.
    """
    if sys.V0 > 0:
        raise DomainError("levels exist only for V0 < 0")
    centre = n - 1.0 / (2.0 * math.pi)

    def energy(a):
        return -(sys.m ** 2 * sys.V0 ** 2 / (sys.hbar * a)) ** (2.0 / 3.0) / (2.0 * sys.m)

    return energy(max(centre - width, 1e-3)), energy(centre + width)


def default_shooting_config(sys: PhysicalSystem, E_bracket, steps: int = 20000,
                            x_max: float | None = None) -> ShootingConfig:
    """Start half a natural length from the origin; end far in the forbidden region."""
    lo, hi = E_bracket
    L = sys.length_scale
    if x_max is None:
        kappa = math.sqrt(-2.0 * sys.m * hi) / sys.hbar
        x_turn = (sys.V0 / hi) ** 2
        x_max = max(60.0 * L, x_turn + 30.0 / kappa)
    return ShootingConfig(0.5 * L, x_max, steps, (lo, hi))


@dataclass
class ResidualReport:
    max_rel_residual: float
    grid: GridFunction
    scale: float

    def __post_init__(self):
        if not math.isfinite(self.max_rel_residual):
            raise ValueError("residual is not finite")


def _second_difference(values: np.ndarray, h: float) -> np.ndarray:
    v = values
    return (-v[4:] + 16.0 * v[3:-1] - 30.0 * v[2:-2] + 16.0 * v[1:-3] - v[:-4]) / (12.0 * h * h)


def residual_check(psi: Callable, sys: PhysicalSystem, E: float, xs) -> ResidualReport:
    """max |psi'' + (2m/hbar**2)(E - V0/sqrt(x)) psi| / scale over the interior of ``xs``.

    ``xs`` must be uniform and positive; ``psi`` must accept arrays.
    ``scale = max|psi| * max|2m(E - V)/hbar**2|`` over the grid.
    """
    xs = np.asarray(xs, dtype=float)
    if xs.ndim != 1 or xs.size < 5:
        raise GridError("residual_check needs at least 5 grid points")
    if xs[0] <= 0:
        raise GridError("residual grid must lie in x > 0")
    steps = np.diff(xs)
    h = steps.mean()
    if np.any(steps <= 0) or np.max(np.abs(steps - h)) > 1e-9 * max(1.0, xs[-1]):
        raise GridError("residual grid must be uniform and increasing")
    f = sys.kinetic_factor(E, xs)
    if h * math.sqrt(np.max(np.abs(f))) > MAX_PHASE_STEP:
        raise GridError(f"grid spacing {h:.3g} too coarse for the five-point stencil")
    values = np.asarray(psi(xs), dtype=float)
    scale = float(np.max(np.abs(values)) * np.max(np.abs(f)))
    if scale == 0:
        raise GridError("psi vanishes identically on the grid")
    res = _second_difference(values, h) - f[2:-2] * values[2:-2]
    rel = np.abs(res) / scale
    return ResidualReport(float(rel.max()), GridFunction(xs[2:-2], rel, {"quantity": "relative residual"}),
                          scale)


def shoot(sys: PhysicalSystem, E: float, cfg: ShootingConfig) -> float:
    """psi(x_max) for the solution regular at the origin (psi ~ x)."""
    g = 2.0 * sys.m * sys.V0 / sys.hbar ** 2
    k = 2.0 * sys.m * E / sys.hbar ** 2
    return float(_ode.numerov_endpoint(g, k, cfg.x0, cfg.h, cfg.steps))


def numerov_profile(sys: PhysicalSystem, E: float, cfg: ShootingConfig) -> GridFunction:
    g = 2.0 * sys.m * sys.V0 / sys.hbar ** 2
    k = 2.0 * sys.m * E / sys.hbar ** 2
    values = _ode.numerov_profile(g, k, cfg.x0, cfg.h, cfg.steps)
    xs = cfg.x0 + cfg.h * np.arange(cfg.steps + 1)
    return GridFunction(xs, values, {"E": E})


def numerov_eigenvalue(sys: PhysicalSystem, cfg: ShootingConfig, max_iter: int = 200) -> float:
    """Bisect on the sign of psi(x_max) inside ``cfg.E_bracket``."""
    if sys.V0 > 0:
        raise DomainError("shooting is set up for attractive potentials only")
    lo, hi = cfg.E_bracket
    f_lo, f_hi = shoot(sys, lo, cfg), shoot(sys, hi, cfg)
    if np.sign(f_lo) == np.sign(f_hi):
        raise BracketError(f"psi(x_max) does not change sign on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= cfg.tol_E * abs(mid) or mid in (lo, hi):
            return mid
        f_mid = shoot(sys, mid, cfg)
        if f_mid == 0:
            return mid
        if np.sign(f_mid) == np.sign(f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    raise ConvergenceError(f"bisection stalled at [{lo}, {hi}]")


def numerov_refinement(sys: PhysicalSystem, E_bracket, steps_list=(1250, 2500, 5000)):
    """Eigenvalues at successive step halvings and the ratios of their differences.

    For a fourth-order method the ratios approach 16.
    """
    energies = []
    for steps in steps_list:
        cfg = default_shooting_config(sys, E_bracket, steps=steps)
        energies.append(numerov_eigenvalue(sys, cfg))
    diffs = np.diff(energies)
    ratios = diffs[:-1] / diffs[1:]
    return np.array(energies), ratios


def wronskian_scan(sys: PhysicalSystem, E: float, xs) -> GridFunction:
    """W(x) = psi_1 psi_2' - psi_2 psi_1' for the c = (1, 0) and (0, 1) solutions."""
    xs = np.asarray(xs, dtype=float)
    if np.any(xs <= 0):
        raise DomainError("the Wronskian scan needs x > 0 (dy/dx is singular at 0)")
    sp = spectral_point(sys, E)
    p1, d1 = eval_psi_and_deriv(sys, sp, SolutionCoefficients(1.0, 0.0), xs)
    p2, d2 = eval_psi_and_deriv(sys, sp, SolutionCoefficients(0.0, 1.0), xs)
    return GridFunction(xs, p1 * d2 - p2 * d1, {"E": E, "quantity": "wronskian"})
