"""Double-double arithmetic kernels.

A double-double number is carried as an unevaluated pair ``(hi, lo)`` with
``|lo| <= ulp(hi)/2``, giving roughly 32 significant digits. Only the
operations needed by the special-function kernels are provided. All
routines avoid FMA and rely on Dekker splitting, so they are valid for
``|x| < 2**996``.
"""
import math

import numpy as np

from ._accel import kernel

LN2_HI, LN2_LO = 0.6931471805599453, 2.3190468138462996e-17
PI_HI, PI_LO = 3.141592653589793, 1.2246467991473532e-16
SQRTPI_HI, SQRTPI_LO = 1.772453850905516, -7.666586499825799e-17
HALF_LN2PI_HI, HALF_LN2PI_LO = 0.9189385332046728, -3.8782941580672414e-17

# unit roundoff of the pair representation
DD_EPS = 2.0 ** -104

# B_{2k} as exact rationals, k = 1..15
_BERN_NUM = np.array([1.0, -1.0, 1.0, -1.0, 5.0, -691.0, 7.0, -3617.0, 43867.0,
                      -174611.0, 854513.0, -236364091.0, 8553103.0,
                      -23749461029.0, 8615841276005.0])
_BERN_DEN = np.array([6.0, 30.0, 42.0, 30.0, 66.0, 2730.0, 6.0, 510.0, 798.0,
                      330.0, 138.0, 2730.0, 6.0, 870.0, 14322.0])
# Stirling coefficients B_{2k} / (2k (2k-1)) as (numerator, denominator)
STIRLING_NUM = _BERN_NUM.copy()
STIRLING_DEN = np.array([_BERN_DEN[k] * (2 * k + 2) * (2 * k + 1)
                         for k in range(15)])

_SPLITTER = 134217729.0  # 2**27 + 1


@kernel
def two_sum(a, b):
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


@kernel
def quick_two_sum(a, b):
    s = a + b
    e = b - (s - a)
    return s, e


@kernel
def split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


@kernel
def two_prod(a, b):
    p = a * b
    ah, al = split(a)
    bh, bl = split(b)
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


@kernel
def dd_add(ah, al, bh, bl):
    s, e = two_sum(ah, bh)
    t, f = two_sum(al, bl)
    e += t
    s, e = quick_two_sum(s, e)
    e += f
    return quick_two_sum(s, e)


@kernel
def dd_add_d(ah, al, b):
    s, e = two_sum(ah, b)
    e += al
    return quick_two_sum(s, e)


@kernel
def dd_mul(ah, al, bh, bl):
    p, e = two_prod(ah, bh)
    e += ah * bl + al * bh
    return quick_two_sum(p, e)


@kernel
def dd_mul_d(ah, al, b):
    p, e = two_prod(ah, b)
    e += al * b
    return quick_two_sum(p, e)


@kernel
def dd_div(ah, al, bh, bl):
    q1 = ah / bh
    ph, pl = dd_mul_d(bh, bl, q1)
    rh, rl = dd_add(ah, al, -ph, -pl)
    q2 = rh / bh
    ph, pl = dd_mul_d(bh, bl, q2)
    rh, rl = dd_add(rh, rl, -ph, -pl)
    q3 = rh / bh
    q1, q2 = quick_two_sum(q1, q2)
    return dd_add_d(q1, q2, q3)


@kernel
def dd_div_d(ah, al, b):
    return dd_div(ah, al, b, 0.0)


@kernel
def dd_exp(ah, al):
    if ah > 709.7:
        return math.inf, 0.0
    if ah < -745.0:
        return 0.0, 0.0
    k = math.floor(ah / LN2_HI + 0.5)
    th, tl = dd_mul_d(LN2_HI, LN2_LO, k)
    rh, rl = dd_add(ah, al, -th, -tl)
    # scale so that the Taylor series of expm1 converges fast
    rh *= 1.0 / 1024.0
    rl *= 1.0 / 1024.0
    ph, pl = rh, rl
    th, tl = rh, rl
    for i in range(2, 14):
        th, tl = dd_mul(th, tl, rh, rl)
        th, tl = dd_div_d(th, tl, float(i))
        ph, pl = dd_add(ph, pl, th, tl)
    # expm1(2x) = 2 expm1(x) + expm1(x)**2
    for _ in range(10):
        sh, sl = dd_mul(ph, pl, ph, pl)
        ph, pl = dd_add(2.0 * ph, 2.0 * pl, sh, sl)
    ph, pl = dd_add_d(ph, pl, 1.0)
    scale = 2.0 ** k
    return ph * scale, pl * scale


@kernel
def dd_log(ah, al):
    """Natural log of a positive double-double (one Newton step on exp)."""
    x = math.log(ah)
    eh, el = dd_exp(-x, 0.0)
    th, tl = dd_mul(ah, al, eh, el)
    th, tl = dd_add_d(th, tl, -1.0)
    return dd_add_d(th, tl, x)


@kernel
def dd_lgamma_large(yh, yl):
    """log Gamma(y) for y >= 25 by the Stirling series (15 terms)."""
    lh, ll = dd_log(yh, yl)
    th, tl = dd_add_d(yh, yl, -0.5)
    th, tl = dd_mul(th, tl, lh, ll)
    th, tl = dd_add(th, tl, -yh, -yl)
    th, tl = dd_add(th, tl, HALF_LN2PI_HI, HALF_LN2PI_LO)
    ih, il = dd_div(1.0, 0.0, yh, yl)
    i2h, i2l = dd_mul(ih, il, ih, il)
    ph, pl = ih, il
    for k in range(STIRLING_NUM.shape[0]):
        ch, cl = dd_div(STIRLING_NUM[k], 0.0, STIRLING_DEN[k], 0.0)
        ch, cl = dd_mul(ch, cl, ph, pl)
        th, tl = dd_add(th, tl, ch, cl)
        ph, pl = dd_mul(ph, pl, i2h, i2l)
    return th, tl


@kernel
def dd_rgamma(xh, xl):
    """1/Gamma(x) in double-double; exactly zero at the poles x = 0, -1, ..."""
    if xl == 0.0 and xh <= 0.0 and xh == math.floor(xh):
        return 0.0, 0.0
    # upward recurrence: 1/Gamma(x) = x (x+1) ... (x+n-1) / Gamma(x+n)
    ph, pl = 1.0, 0.0
    yh, yl = xh, xl
    while yh < 25.0:
        ph, pl = dd_mul(ph, pl, yh, yl)
        yh, yl = dd_add_d(yh, yl, 1.0)
    gh, gl = dd_lgamma_large(yh, yl)
    gh, gl = dd_exp(gh, gl)
    return dd_div(ph, pl, gh, gl)
