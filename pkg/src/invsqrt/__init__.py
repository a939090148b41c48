"""Schroedinger bound states for the potential V0/sqrt(x) on the half-line.

Closed-form solutions are built from Hermite functions of non-integer
order; bound-state energies are roots of a two-Hermite transcendental
equation. Independent checks (Numerov shooting, equation residuals and a
tri-confluent Heun integration) live in ``oracle`` and ``heun_check``.
"""
from ._accel import BACKEND
from .closed_form import (GridFunction, PhysicalSystem, SolutionCoefficients,
                          SpectralPoint, eval_psi, eval_u_and_dudy, map_y,
                          quasipoly_energy, quasipoly_explicit, quasipoly_psi,
                          recessive_coefficients, spectral_point)
from .errors import (BracketError, ConvergenceError, DomainError, GridError,
                     InvSqrtError, PoleError, PrecisionError, RangeError,
                     SingularRatioError, ToleranceError)
from .specfun import (EvalResult, hermite_h, hermite_h_deriv, kummer_1f1,
                      log_gamma_real)
from .spectrum import (BoundState, approx_root, approx_spectrum, bound_state,
                       coefficient_ratio, energy_from_a, eval_F,
                       exact_spectrum, overlap, relative_energy_error,
                       solve_exact_root, spectrum_fn)

__version__ = "0.1.0"
