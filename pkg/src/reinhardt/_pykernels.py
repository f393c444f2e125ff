"""Numpy reference kernels.

The compiled ``_ckernels`` module exports the same four functions with the
same argument order; :mod:`reinhardt.kernels` picks one at import time.
All inputs are 1-D float64 arrays of equal length, ``params`` is a length-3
float sequence (unused slots are ignored).

Domain codes
------------
1       ``|z1|^2 + |z2|^(1/alpha) < 1``                     params (alpha,)
11..15  normalized forms, params (alpha|beta, r|R, R)      see ``_walls``
100     the sine-band domain ``sin(log m1/m2) < log m1 m2 < ... + 1/2``
"""
import numpy as np

THEOREM_I = 1
FORM_11, FORM_12, FORM_13, FORM_14, FORM_15 = 11, 12, 13, 14, 15
SINE_BAND = 100

HINGE_CAP = 1.0

_INF = np.inf


def _upper(lm2, R, w):
    if np.isinf(R):
        return np.full_like(lm2, -_INF)
    return lm2 - np.log(R) - w


def g_modulus(code, params, m1, m2):
    p0, p1, p2 = params[0], params[1], params[2]
    with np.errstate(all="ignore"):
        if code == THEOREM_I:
            g = m1 * m1 + np.power(m2, 1.0 / p0) - 1.0
        elif FORM_11 <= code <= FORM_13:
            disc = m1 < 1.0
            w = p0 * np.log1p(-np.where(disc, m1 * m1, 0.0))
            lm2 = np.log(m2)
            if code == FORM_11:
                walls = _upper(lm2, p1, w)
            elif code == FORM_12:
                walls = np.fmax(np.log(p1) + w - lm2, _upper(lm2, p2, w))
            else:
                walls = np.fmax(np.where(m2 > 0.0, -_INF, _INF), _upper(lm2, p1, w))
            g = np.where(disc, np.fmax(m1 * m1 - 1.0, walls), m1 * m1 - 1.0)
        elif code in (FORM_14, FORM_15):
            e = p0 * m1 * m1
            lm2 = np.log(m2)
            if code == FORM_14:
                g = np.fmax(np.log(p1) + e - lm2, _upper(lm2, p2, e))
            else:
                g = np.fmax(np.where(m2 > 0.0, -_INF, _INF), _upper(lm2, p1, e))
        elif code == SINE_BAND:
            ok = (m1 > 0.0) & (m2 > 0.0)
            l1 = np.log(np.where(ok, m1, 1.0))
            l2 = np.log(np.where(ok, m2, 1.0))
            s = l1 + l2
            sn = np.sin(l1 - l2)
            g = np.where(ok, np.fmax(sn - s, s - sn - 0.5), _INF)
        else:
            raise ValueError(f"unknown domain code {code}")
    return np.where(np.isnan(g), _INF, g)


def shadow(code, params, u1, u2):
    with np.errstate(over="ignore"):  # exp overflow to inf is outside every domain
        m1, m2 = np.exp(u1), np.exp(u2)
    return g_modulus(code, params, m1, m2)


def hinge_with(shadow_fn, A, t1, t2, u1, u2, chunk=1 << 18):
    """Mean saturated hinge ``min(max(shadow(A u + t), 0), cap)`` per translation."""
    a11, a12, a21, a22 = (float(x) for x in A)
    v1 = a11 * u1 + a12 * u2
    v2 = a21 * u1 + a22 * u2
    n = u1.shape[0]
    out = np.empty(t1.shape[0])
    per = max(1, chunk // max(n, 1))
    for start in range(0, t1.shape[0], per):
        s1 = t1[start:start + per, None] + v1[None, :]
        s2 = t2[start:start + per, None] + v2[None, :]
        h = np.clip(shadow_fn(s1, s2), 0.0, HINGE_CAP)
        out[start:start + per] = h.mean(axis=1)
    return out


def hinge_batch(code, params, A, t1, t2, u1, u2):
    return hinge_with(lambda a, b: shadow(code, params, a, b), A, t1, t2, u1, u2)


def bisect_with(g_fn, m1_in, m2_in, m1_out, m2_out, tol, maxiter):
    """Bisect segments [inside, outside] until ``|g| <= tol``; NaN where it never gets there."""
    lo1, lo2 = m1_in.copy(), m2_in.copy()
    hi1, hi2 = m1_out.copy(), m2_out.copy()
    n = lo1.shape[0]
    r1, r2 = np.full(n, np.nan), np.full(n, np.nan)
    ok = np.zeros(n, dtype=bool)
    active = np.ones(n, dtype=bool)
    for _ in range(maxiter):
        if not active.any():
            break
        mid1 = 0.5 * (lo1 + hi1)
        mid2 = 0.5 * (lo2 + hi2)
        g = g_fn(mid1, mid2)
        hit = active & (np.abs(g) <= tol)
        r1[hit], r2[hit] = mid1[hit], mid2[hit]
        ok |= hit
        active &= ~hit
        inside = g < 0.0
        lo1 = np.where(active & inside, mid1, lo1)
        lo2 = np.where(active & inside, mid2, lo2)
        hi1 = np.where(active & ~inside, mid1, hi1)
        hi2 = np.where(active & ~inside, mid2, hi2)
    return r1, r2, ok


def bisect(code, params, m1_in, m2_in, m1_out, m2_out, tol, maxiter):
    return bisect_with(lambda a, b: g_modulus(code, params, a, b),
                       m1_in, m2_in, m1_out, m2_out, tol, maxiter)
