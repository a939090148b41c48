"""Compiled ODE integrators: Numerov shooting and step-doubling RK4."""
import math

import numpy as np

from ._accel import kernel

FROBENIUS_TERMS = 60


@kernel
def frobenius(x, g, k):
    """Regular solution of psi'' = (g / sqrt(x) - k) psi with psi ~ x at 0.

    psi = sum_j c_j x**(j/2), c_2 = 1, c_j (j/2)(j/2 - 1) = g c_{j-3} - k c_{j-4}.
    Returns (psi, dpsi/dx).
    """
    c = np.zeros(FROBENIUS_TERMS)
    c[2] = 1.0
    for j in range(5, FROBENIUS_TERMS):
        c[j] = (g * c[j - 3] - k * c[j - 4]) / (0.5 * j * (0.5 * j - 1.0))
    t = math.sqrt(x)
    psi = 0.0
    dpsi = 0.0
    for j in range(FROBENIUS_TERMS - 1, 1, -1):
        psi = psi * t + c[j]
        dpsi = dpsi * t + 0.5 * j * c[j]
    # both sums run over t**(j-2); psi needs the factor t**2 = x back
    return psi * x, dpsi


@kernel
def numerov_profile(g, k, x0, h, steps):
    """Integrate psi'' = (g/sqrt(x) - k) psi outward on x_i = x0 + i h.

    g = 2 m V0 / hbar**2 and k = 2 m E / hbar**2; the first two points come
    from the Frobenius series.
    """
    psi = np.empty(steps + 1)
    psi[0] = frobenius(x0, g, k)[0]
    psi[1] = frobenius(x0 + h, g, k)[0]
    h12 = h * h / 12.0
    f_prev = g / math.sqrt(x0) - k
    f_cur = g / math.sqrt(x0 + h) - k
    w_prev = (1.0 - h12 * f_prev) * psi[0]
    w_cur = (1.0 - h12 * f_cur) * psi[1]
    for i in range(2, steps + 1):
        x = x0 + i * h
        f_next = g / math.sqrt(x) - k
        w_next = 2.0 * w_cur - w_prev + 12.0 * h12 * f_cur * psi[i - 1]
        psi[i] = w_next / (1.0 - h12 * f_next)
        w_prev = w_cur
        w_cur = w_next
        f_cur = f_next
    return psi


@kernel
def numerov_endpoint(g, k, x0, h, steps):
    """psi(x0 + steps h) only, without storing the profile."""
    p0 = frobenius(x0, g, k)[0]
    p1 = frobenius(x0 + h, g, k)[0]
    h12 = h * h / 12.0
    f0 = g / math.sqrt(x0) - k
    f1 = g / math.sqrt(x0 + h) - k
    w0 = (1.0 - h12 * f0) * p0
    w1 = (1.0 - h12 * f1) * p1
    for i in range(2, steps + 1):
        f2 = g / math.sqrt(x0 + i * h) - k
        w2 = 2.0 * w1 - w0 + 12.0 * h12 * f1 * p1
        p1 = w2 / (1.0 - h12 * f2)
        w0 = w1
        w1 = w2
        f1 = f2
    return p1


@kernel
def _tch_rhs(z, u, up, gamma, delta, eps, alpha, q):
    return up, -(gamma + delta * z + eps * z * z) * up - (alpha * z - q) * u


@kernel
def _rk4_step(z, u, up, h, gamma, delta, eps, alpha, q):
    k1u, k1p = _tch_rhs(z, u, up, gamma, delta, eps, alpha, q)
    k2u, k2p = _tch_rhs(z + 0.5 * h, u + 0.5 * h * k1u, up + 0.5 * h * k1p,
                        gamma, delta, eps, alpha, q)
    k3u, k3p = _tch_rhs(z + 0.5 * h, u + 0.5 * h * k2u, up + 0.5 * h * k2p,
                        gamma, delta, eps, alpha, q)
    k4u, k4p = _tch_rhs(z + h, u + h * k3u, up + h * k3p, gamma, delta, eps, alpha, q)
    return (u + h * (k1u + 2.0 * k2u + 2.0 * k3u + k4u) / 6.0,
            up + h * (k1p + 2.0 * k2p + 2.0 * k3p + k4p) / 6.0)


@kernel
def rk4_doubling(zs, u0, up0, gamma, delta, eps, alpha, q, tol, max_steps):
    """u'' + (gamma + delta z + eps z**2) u' + (alpha z - q) u = 0 on the grid ``zs``.

    Each step is compared with two half steps; the local error estimate
    |y_half - y_full| / 15 must stay below ``tol`` relative to max(|u|, |u'|).
    Returns (u, u', status) with status 0 on success and 1 on step-control failure.
    """
    n = zs.shape[0]
    u = np.empty(n)
    up = np.empty(n)
    u[0] = u0
    up[0] = up0
    z = zs[0]
    cu = u0
    cp = up0
    h = min(0.01, zs[1] - zs[0]) if n > 1 else 0.01
    taken = 0
    for i in range(1, n):
        target = zs[i]
        while z < target:
            step = min(h, target - z)
            fu, fp = _rk4_step(z, cu, cp, step, gamma, delta, eps, alpha, q)
            hu, hp = _rk4_step(z, cu, cp, 0.5 * step, gamma, delta, eps, alpha, q)
            hu, hp = _rk4_step(z + 0.5 * step, hu, hp, 0.5 * step, gamma, delta, eps, alpha, q)
            err = max(abs(hu - fu), abs(hp - fp)) / 15.0
            scale = max(abs(hu), abs(hp), 1e-300)
            taken += 1
            if taken > max_steps:
                return u, up, 1
            if err <= tol * scale:
                cu = hu + (hu - fu) / 15.0
                cp = hp + (hp - fp) / 15.0
                z = target if step == target - z else z + step
                if err == 0.0:
                    fac = 2.0
                else:
                    fac = min(2.0, max(0.2, 0.9 * (tol * scale / err) ** 0.2))
                if step == h:
                    h *= fac
            else:
                h = step * max(0.2, 0.9 * (tol * scale / err) ** 0.2)
                if h < 1e-13 * (1.0 + abs(z)):
                    return u, up, 1
        u[i] = cu
        up[i] = cp
    return u, up, 0
