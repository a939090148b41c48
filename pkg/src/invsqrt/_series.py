"""Compiled series kernels for 1F1 and the Hermite function.

Every evaluator returns ``(value, abs_err, terms, escalated, status)``.
``status`` is 0 on success, 1 when the series did not converge within
``MAX_TERMS`` and 2 when the error target is missed after escalation.
"""
import math

import numpy as np

from ._accel import kernel
from ._dd import (DD_EPS, LN2_HI, LN2_LO, SQRTPI_HI, SQRTPI_LO, dd_add,
                  dd_add_d, dd_div, dd_div_d, dd_exp, dd_mul, dd_mul_d,
                  dd_rgamma, two_prod, two_sum)

MAX_TERMS = 500
SMALL_RUN = 3
TERM_RTOL = 1e-17
COND_ESCALATE = 1e4
REL_TARGET = 1e-12
EPS = 2.0 ** -53

OK, NOT_CONVERGED, PRECISION = 0, 1, 2


@kernel
def f11_d(a, b, z):
    """Neumaier-compensated series; returns (sum, sum|terms|, terms, ok)."""
    s = 1.0
    comp = 0.0
    sabs = 1.0
    term = 1.0
    run = 0
    k = 0
    while k < MAX_TERMS:
        ratio = (a + k) / (b + k) * z / (k + 1)
        term *= ratio
        k += 1
        t = s + term
        if abs(s) >= abs(term):
            comp += (s - t) + term
        else:
            comp += (term - t) + s
        s = t
        sabs += abs(term)
        if term == 0.0:
            return s + comp, sabs, k, True
        if abs(ratio) < 1.0 and abs(term) < TERM_RTOL * abs(s + comp):
            run += 1
            if run >= SMALL_RUN:
                return s + comp, sabs, k, True
        else:
            run = 0
    return s + comp, sabs, k, False


@kernel
def f11_dd(ah, al, bh, bl, zh, zl):
    """Series in double-double; returns (hi, lo, sum|terms|, terms, ok)."""
    sh, sl = 1.0, 0.0
    th, tl = 1.0, 0.0
    sabs = 1.0
    run = 0
    k = 0
    while k < MAX_TERMS:
        nh, nl = dd_add_d(ah, al, float(k))
        dh, dl = dd_add_d(bh, bl, float(k))
        th, tl = dd_mul(th, tl, nh, nl)
        th, tl = dd_mul(th, tl, zh, zl)
        th, tl = dd_div(th, tl, dh, dl)
        th, tl = dd_div_d(th, tl, float(k + 1))
        k += 1
        sh, sl = dd_add(sh, sl, th, tl)
        sabs += abs(th)
        if th == 0.0:
            return sh, sl, sabs, k, True
        ratio = abs((ah + k - 1) / (bh + k - 1) * zh / k)
        if ratio < 1.0 and abs(th) < TERM_RTOL * TERM_RTOL * abs(sh):
            run += 1
            if run >= SMALL_RUN:
                return sh, sl, sabs, k, True
        else:
            run = 0
    return sh, sl, sabs, k, False


@kernel
def rgamma_d(x):
    if x <= 0.0 and x == math.floor(x):
        return 0.0
    if x > 170.0:
        return math.exp(-math.lgamma(x))
    return 1.0 / math.gamma(x)


@kernel
def kummer_eval(a, b, z, route):
    """1F1(a; b; z). route: 0 auto, 1 direct series, 2 Kummer transform."""
    s1, m1, k1, ok1 = f11_d(a, b, z)
    use_kummer = route == 2
    if route == 0 and z < 0.0:
        cond1 = m1 / abs(s1) if s1 != 0.0 else math.inf
        if cond1 > COND_ESCALATE or not ok1:
            use_kummer = True
    if use_kummer:
        ez = math.exp(z)
        s2, m2, k2, ok2 = f11_d(b - a, b, -z)
        val, mag, terms, ok = ez * s2, ez * m2, k2, ok2
    else:
        val, mag, terms, ok = s1, m1, k1, ok1
    if not ok:
        return val, math.inf, terms, False, NOT_CONVERGED
    err = (4.0 + abs(z)) * EPS * mag
    cond = mag / abs(val) if val != 0.0 else math.inf
    if cond <= COND_ESCALATE and err <= REL_TARGET * max(1.0, abs(val)):
        return val, err, terms, False, OK
    # escalate the chosen route to double-double
    if use_kummer:
        bah, bal = two_sum(b, -a)
        sh, sl, m, k, ok = f11_dd(bah, bal, b, 0.0, -z, 0.0)
        eh, el = dd_exp(z, 0.0)
        sh, sl = dd_mul(sh, sl, eh, el)
        m *= eh
    else:
        sh, sl, m, k, ok = f11_dd(a, 0.0, b, 0.0, z, 0.0)
    val = sh + sl
    if not ok:
        return val, math.inf, k, True, NOT_CONVERGED
    err = 16.0 * DD_EPS * m + EPS * abs(val)
    if err > REL_TARGET * max(1.0, abs(val)):
        return val, err, k, True, PRECISION
    return val, err, k, True, OK


@kernel
def hermite_d(nu, z):
    """H_nu(z) from the two Gamma-weighted 1F1 branches in double."""
    z2 = z * z
    rp = rgamma_d(0.5 * (1.0 - nu))
    rq = rgamma_d(-0.5 * nu)
    even, m_even, k_even, ok_even = 0.0, 0.0, 0, True
    odd, m_odd, k_odd, ok_odd = 0.0, 0.0, 0, True
    if rp != 0.0:
        even, m_even, k_even, ok_even = f11_d(-0.5 * nu, 0.5, z2)
    if rq != 0.0 and z != 0.0:
        odd, m_odd, k_odd, ok_odd = f11_d(0.5 * (1.0 - nu), 1.5, z2)
    pref = math.exp(nu * LN2_HI) * SQRTPI_HI
    val = pref * (rp * even - 2.0 * z * rq * odd)
    mag = pref * (abs(rp) * m_even + 2.0 * abs(z) * abs(rq) * m_odd)
    return val, mag, k_even + k_odd, ok_even and ok_odd


@kernel
def hermite_dd(nu, z):
    """Same combination with every step in double-double."""
    z2h, z2l = two_prod(z, z)
    ph, pl = two_sum(1.0, -nu)
    ph *= 0.5
    pl *= 0.5
    qh, ql = -0.5 * nu, 0.0
    rph, rpl = dd_rgamma(ph, pl)
    rqh, rql = dd_rgamma(qh, ql)
    eh, el, m_even, k_even, ok_even = 0.0, 0.0, 0.0, 0, True
    oh, ol, m_odd, k_odd, ok_odd = 0.0, 0.0, 0.0, 0, True
    if rph != 0.0:
        eh, el, m_even, k_even, ok_even = f11_dd(qh, ql, 0.5, 0.0, z2h, z2l)
    if rqh != 0.0 and z != 0.0:
        oh, ol, m_odd, k_odd, ok_odd = f11_dd(ph, pl, 1.5, 0.0, z2h, z2l)
    t1h, t1l = dd_mul(rph, rpl, eh, el)
    t2h, t2l = dd_mul(rqh, rql, oh, ol)
    t2h, t2l = dd_mul_d(t2h, t2l, 2.0 * z)
    vh, vl = dd_add(t1h, t1l, -t2h, -t2l)
    xh, xl = dd_mul_d(LN2_HI, LN2_LO, nu)
    xh, xl = dd_exp(xh, xl)
    xh, xl = dd_mul(xh, xl, SQRTPI_HI, SQRTPI_LO)
    vh, vl = dd_mul(vh, vl, xh, xl)
    mag = xh * (abs(rph) * m_even + 2.0 * abs(z) * abs(rqh) * m_odd)
    return vh + vl, mag, k_even + k_odd, ok_even and ok_odd


@kernel
def hermite_eval(nu, z):
    val, mag, terms, ok = hermite_d(nu, z)
    if not ok:
        return val, math.inf, terms, False, NOT_CONVERGED
    # z**2 is rounded before summation; the branches amplify that by ~z**2
    err = (4.0 + 2.0 * z * z + abs(nu)) * EPS * mag
    cond = mag / abs(val) if val != 0.0 else math.inf
    if cond <= COND_ESCALATE and err <= REL_TARGET * max(1.0, abs(val)):
        return val, err, terms, False, OK
    val, mag, terms, ok = hermite_dd(nu, z)
    if not ok:
        return val, math.inf, terms, True, NOT_CONVERGED
    err = 32.0 * DD_EPS * mag + EPS * abs(val)
    if err > REL_TARGET * max(1.0, abs(val)):
        return val, err, terms, True, PRECISION
    return val, err, terms, True, OK


@kernel
def hermite_many(nu, zs):
    n = zs.shape[0]
    vals = np.empty(n)
    errs = np.empty(n)
    status = np.zeros(n, dtype=np.int64)
    for i in range(n):
        v, e, _, _, st = hermite_eval(nu, zs[i])
        vals[i] = v
        errs[i] = e
        status[i] = st
    return vals, errs, status


@kernel
def kummer_many(a, b, zs):
    n = zs.shape[0]
    vals = np.empty(n)
    errs = np.empty(n)
    status = np.zeros(n, dtype=np.int64)
    for i in range(n):
        v, e, _, _, st = kummer_eval(a, b, zs[i], 0)
        vals[i] = v
        errs[i] = e
        status[i] = st
    return vals, errs, status
