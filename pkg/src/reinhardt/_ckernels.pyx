# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the kernels in ``_pykernels`` (same signatures)."""
import numpy as np

from libc.math cimport log, log1p, exp, sin, pow, fmax, fabs, isnan, isinf, INFINITY

cdef double HINGE_CAP = 1.0


cdef inline double _upper(double lm2, double R, double w) noexcept nogil:
    if isinf(R):
        return -INFINITY
    return lm2 - log(R) - w


cdef double _g(int code, double p0, double p1, double p2,
               double m1, double m2) noexcept nogil:
    cdef double g, w, lm2, walls, e, l1, l2, s, sn
    if code == 1:
        g = m1 * m1 + pow(m2, 1.0 / p0) - 1.0
    elif code >= 11 and code <= 13:
        if not (m1 < 1.0):
            return m1 * m1 - 1.0
        w = p0 * log1p(-m1 * m1)
        lm2 = log(m2)
        if code == 11:
            walls = _upper(lm2, p1, w)
        elif code == 12:
            walls = fmax(log(p1) + w - lm2, _upper(lm2, p2, w))
        else:
            walls = fmax(-INFINITY if m2 > 0.0 else INFINITY, _upper(lm2, p1, w))
        g = fmax(m1 * m1 - 1.0, walls)
    elif code == 14 or code == 15:
        e = p0 * m1 * m1
        lm2 = log(m2)
        if code == 14:
            g = fmax(log(p1) + e - lm2, _upper(lm2, p2, e))
        else:
            g = fmax(-INFINITY if m2 > 0.0 else INFINITY, _upper(lm2, p1, e))
    elif code == 100:
        if not (m1 > 0.0 and m2 > 0.0):
            return INFINITY
        l1 = log(m1)
        l2 = log(m2)
        s = l1 + l2
        sn = sin(l1 - l2)
        g = fmax(sn - s, s - sn - 0.5)
    else:
        return INFINITY
    if isnan(g):
        return INFINITY
    return g


cdef double _g_log(int code, double p0, double p1, double p2,
                   double u1, double u2) noexcept nogil:
    # _g(code, exp(u1), exp(u2)) without the exp/log round trip
    cdef double g, w, m1, walls, e, sn
    if code == 1:
        g = exp(2.0 * u1) + exp(u2 / p0) - 1.0
    elif code >= 11 and code <= 13:
        if not (u1 < 0.0):
            m1 = exp(u1)
            return m1 * m1 - 1.0
        m1 = exp(u1)
        w = p0 * log1p(-m1 * m1)
        if code == 11:
            walls = _upper(u2, p1, w)
        elif code == 12:
            walls = fmax(log(p1) + w - u2, _upper(u2, p2, w))
        else:
            walls = fmax(-INFINITY if u2 > -INFINITY else INFINITY, _upper(u2, p1, w))
        g = fmax(m1 * m1 - 1.0, walls)
    elif code == 14 or code == 15:
        e = p0 * exp(2.0 * u1)
        if code == 14:
            g = fmax(log(p1) + e - u2, _upper(u2, p2, e))
        else:
            g = fmax(-INFINITY if u2 > -INFINITY else INFINITY, _upper(u2, p1, e))
    elif code == 100:
        if not (u1 > -INFINITY and u2 > -INFINITY):
            return INFINITY
        sn = sin(u1 - u2)
        g = fmax(sn - (u1 + u2), (u1 + u2) - sn - 0.5)
    else:
        return INFINITY
    if isnan(g):
        return INFINITY
    return g


cdef int _check(int code) except -1:
    if code == 1 or (code >= 11 and code <= 15) or code == 100:
        return 0
    raise ValueError(f"unknown domain code {code}")


def g_modulus(int code, params, double[::1] m1, double[::1] m2):
    _check(code)
    cdef double p0 = params[0], p1 = params[1], p2 = params[2]
    cdef Py_ssize_t i, n = m1.shape[0]
    out = np.empty(n)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _g(code, p0, p1, p2, m1[i], m2[i])
    return out


def shadow(int code, params, double[::1] u1, double[::1] u2):
    _check(code)
    cdef double p0 = params[0], p1 = params[1], p2 = params[2]
    cdef Py_ssize_t i, n = u1.shape[0]
    out = np.empty(n)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _g_log(code, p0, p1, p2, u1[i], u2[i])
    return out


def hinge_batch(int code, params, A, double[::1] t1, double[::1] t2,
                double[::1] u1, double[::1] u2):
    _check(code)
    cdef double p0 = params[0], p1 = params[1], p2 = params[2]
    cdef double a11 = A[0], a12 = A[1], a21 = A[2], a22 = A[3]
    cdef Py_ssize_t k, i, m = t1.shape[0], n = u1.shape[0]
    cdef double acc, s, v1, v2
    out = np.empty(m)
    cdef double[::1] o = out
    with nogil:
        for k in range(m):
            acc = 0.0
            for i in range(n):
                v1 = a11 * u1[i] + a12 * u2[i] + t1[k]
                v2 = a21 * u1[i] + a22 * u2[i] + t2[k]
                s = _g_log(code, p0, p1, p2, v1, v2)
                if s > HINGE_CAP:
                    s = HINGE_CAP
                if s > 0.0:
                    acc += s
            o[k] = acc / n if n > 0 else 0.0
    return out


def bisect(int code, params, double[::1] m1_in, double[::1] m2_in,
           double[::1] m1_out, double[::1] m2_out, double tol, int maxiter):
    _check(code)
    cdef double p0 = params[0], p1 = params[1], p2 = params[2]
    cdef Py_ssize_t i, n = m1_in.shape[0]
    cdef int it
    cdef double lo1, lo2, hi1, hi2, mid1, mid2, g
    r1 = np.full(n, np.nan)
    r2 = np.full(n, np.nan)
    ok = np.zeros(n, dtype=np.uint8)
    cdef double[::1] o1 = r1, o2 = r2
    cdef unsigned char[::1] ov = ok
    with nogil:
        for i in range(n):
            lo1 = m1_in[i]; lo2 = m2_in[i]
            hi1 = m1_out[i]; hi2 = m2_out[i]
            for it in range(maxiter):
                mid1 = 0.5 * (lo1 + hi1)
                mid2 = 0.5 * (lo2 + hi2)
                g = _g(code, p0, p1, p2, mid1, mid2)
                if fabs(g) <= tol:
                    o1[i] = mid1
                    o2[i] = mid2
                    ov[i] = 1
                    break
                if g < 0.0:
                    lo1 = mid1; lo2 = mid2
                else:
                    hi1 = mid1; hi2 = mid2
    return r1, r2, ok.astype(bool)
