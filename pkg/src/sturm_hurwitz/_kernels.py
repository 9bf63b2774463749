"""Compiled inner loops for zero refinement.

Coefficients come in one of two layouts.  Dense: ``a[j], b[j]`` belong to
order ``kmin + j`` and ``cos/sin(k x)`` are stepped by the angle-addition
recurrence.  Sparse: explicit ``orders`` with direct cos/sin per term.
"""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def _value_slope(x, dense, kmin, orders, a, b):
    v = 0.0
    d = 0.0
    if dense:
        c1 = math.cos(x)
        s1 = math.sin(x)
        ck = math.cos(kmin * x)
        sk = math.sin(kmin * x)
        for j in range(a.size):
            k = kmin + j
            v += a[j] * ck + b[j] * sk
            d += k * (b[j] * ck - a[j] * sk)
            ck, sk = ck * c1 - sk * s1, sk * c1 + ck * s1
    else:
        for j in range(a.size):
            k = orders[j]
            ck = math.cos(k * x)
            sk = math.sin(k * x)
            v += a[j] * ck + b[j] * sk
            d += k * (b[j] * ck - a[j] * sk)
    return v, d


@njit(cache=True)
def values(xs, dense, kmin, orders, a, b):
    out = np.empty(xs.size)
    for i in range(xs.size):
        out[i], _ = _value_slope(xs[i], dense, kmin, orders, a, b)
    return out


@njit(cache=True)
def _sgn(v):
    if v > 0.0:
        return 1.0
    if v < 0.0:
        return -1.0
    return 0.0


@njit(cache=True)
def refine(lo_in, hi_in, s_lo, xtol, max_iter, dense, kmin, orders, a, b):
    """Shrink each sign-change bracket below ``xtol`` and return the midpoints.

    Per round: probe the estimate ``x`` and ``x -+ xtol/4``, keep the first
    sign-changing sub-interval among probes inside the bracket, then take a
    Newton step from ``x`` if it stays inside and the last round at least
    halved the bracket, else the midpoint.
    """
    m = lo_in.size
    out = np.empty(m)
    delta = 0.25 * xtol
    pts = np.empty(3)
    sg = np.empty(3)
    for i in range(m):
        lo = lo_in[i]
        hi = hi_in[i]
        slo = s_lo[i]
        x = 0.5 * (lo + hi)
        width_prev = hi - lo
        for _ in range(max_iter):
            width = hi - lo
            if width < xtol:
                break
            pts[0] = x - delta
            pts[1] = x
            pts[2] = x + delta
            fx = 0.0
            dfx = 0.0
            for j in range(3):
                v, d = _value_slope(pts[j], dense, kmin, orders, a, b)
                sg[j] = _sgn(v)
                if j == 1:
                    fx = v
                    dfx = d
            new_lo = lo
            new_hi = hi
            for j in range(3):
                if pts[j] <= lo or pts[j] >= hi:
                    continue
                if sg[j] == slo:
                    new_lo = pts[j]
                else:
                    new_hi = pts[j]
                    if sg[j] == 0.0:
                        new_lo = pts[j]
                    break
            lo = new_lo
            hi = new_hi
            progress = (hi - lo) <= 0.5 * width_prev
            width_prev = width
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            step_ok = False
            if dfx != 0.0:
                newton = x - fx / dfx
                if newton > lo and newton < hi and progress and math.isfinite(newton):
                    step_ok = True
                    x = newton
            if not step_ok:
                x = mid
        out[i] = 0.5 * (lo + hi)
    return out
