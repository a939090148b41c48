"""Kummer's confluent hypergeometric function and Hermite functions of real order.

Both functions are summed from their power series. The double-precision
pass tracks the ratio ``sum|terms| / |sum|``; when it exceeds ``1e4`` (or the
resulting error bound misses ``1e-12`` relative) the evaluation is repeated
in double-double arithmetic and ``escalated`` is set on the result.

The Hermite function is the entire solution of ``w'' - 2 z w' + 2 nu w = 0``
normalised as

    H_nu(z) = 2**nu sqrt(pi) [ 1F1(-nu/2; 1/2; z**2) / Gamma((1 - nu)/2)
                               - 2 z 1F1((1 - nu)/2; 3/2; z**2) / Gamma(-nu/2) ]

which reduces to the physicists' Hermite polynomial for integer ``nu >= 0``.
No asymptotic expansions are used here; large arguments are the caller's
concern.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _series
from .errors import PoleError, PrecisionError


@dataclass(frozen=True)
class EvalResult:
    value: float
    abs_error_estimate: float
    terms_used: int
    escalated: bool

    def __float__(self) -> float:
        return self.value


def _check(status: int, what: str) -> None:
    if status == _series.NOT_CONVERGED:
        raise PrecisionError(f"{what}: series did not converge in {_series.MAX_TERMS} terms")
    if status == _series.PRECISION:
        raise PrecisionError(f"{what}: cancellation too severe even in double-double")


def _is_nonpositive_int(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def kummer_1f1(a: float, b: float, z: float, *, route: str = "auto") -> EvalResult:
    """Kummer's function 1F1(a; b; z) for real arguments.

    ``route`` may force the plain series (``"direct"``) or the Kummer
    transformation ``e**z 1F1(b - a; b; -z)`` (``"kummer"``); the default picks
    the transformation for negative ``z`` when the plain series cancels.
    """
    a, b, z = float(a), float(b), float(z)
    if not all(map(math.isfinite, (a, b, z))):
        raise ValueError("kummer_1f1 requires finite arguments")
    if _is_nonpositive_int(b):
        raise PoleError(f"1F1 has a pole at b = {b:g}")
    try:
        code = {"auto": 0, "direct": 1, "kummer": 2}[route]
    except KeyError:
        raise ValueError(f"unknown route {route!r}") from None
    val, err, terms, esc, status = _series.kummer_eval(a, b, z, code)
    _check(status, f"1F1({a:g}; {b:g}; {z:g})")
    return EvalResult(float(val), float(err), int(terms), bool(esc))


def hermite_h(nu: float, z: float) -> EvalResult:
    """Hermite function H_nu(z) of arbitrary real order."""
    nu, z = float(nu), float(z)
    if not (math.isfinite(nu) and math.isfinite(z)):
        raise ValueError("hermite_h requires finite arguments")
    val, err, terms, esc, status = _series.hermite_eval(nu, z)
    _check(status, f"H_{nu:g}({z:g})")
    return EvalResult(float(val), float(err), int(terms), bool(esc))


def hermite_h_deriv(nu: float, z: float) -> EvalResult:
    """dH_nu/dz through the identity H_nu'(z) = 2 nu H_{nu-1}(z)."""
    nu = float(nu)
    if nu == 0.0:
        return EvalResult(0.0, 0.0, 0, False)
    r = hermite_h(nu - 1.0, z)
    return EvalResult(2.0 * nu * r.value, 2.0 * abs(nu) * r.abs_error_estimate,
                      r.terms_used, r.escalated)


def log_gamma_real(x: float) -> tuple[float, int]:
    """Return ``(log|Gamma(x)|, sign Gamma(x))``; poles give ``(inf, 0)``."""
    x = float(x)
    if _is_nonpositive_int(x):
        return math.inf, 0
    if x > 0:
        return math.lgamma(x), 1
    # Gamma alternates sign between consecutive negative integers
    sign = -1 if math.floor(x) % 2 else 1
    return math.lgamma(x), sign


def hermite_array(nu: float, zs) -> np.ndarray:
    """Vectorised ``hermite_h(nu, z).value`` over an array of arguments."""
    zs = np.asarray(zs, dtype=float)
    flat = np.ascontiguousarray(zs.ravel())
    vals, _, status = _series.hermite_many(float(nu), flat)
    bad = status != _series.OK
    if bad.any():
        z_bad = flat[np.argmax(bad)]
        _check(int(status[bad][0]), f"H_{nu:g}({z_bad:g})")
    return vals.reshape(zs.shape)


def kummer_array(a: float, b: float, zs) -> np.ndarray:
    """Vectorised ``kummer_1f1(a, b, z).value``."""
    if _is_nonpositive_int(float(b)):
        raise PoleError(f"1F1 has a pole at b = {b:g}")
    zs = np.asarray(zs, dtype=float)
    flat = np.ascontiguousarray(zs.ravel())
    vals, _, status = _series.kummer_many(float(a), float(b), flat)
    bad = status != _series.OK
    if bad.any():
        _check(int(status[bad][0]), f"1F1({a:g}; {b:g}; z)")
    return vals.reshape(zs.shape)
