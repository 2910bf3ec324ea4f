# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels in ``_kernels_py``; same signatures."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, log, log1p, pow, sin, cos, ceil, fabs, floor, M_PI

cnp.import_array()

BACKEND = "cython"

cdef double _SIGMA = 0.25
cdef int _MAX_LEVELS = 60


cdef inline double _ipow(double x, int n) nogil:
    cdef double acc = 1.0
    cdef bint neg = n < 0
    if neg:
        n = -n
    while n:
        if n & 1:
            acc *= x
        x *= x
        n >>= 1
    return 1.0 / acc if neg else acc


def angular_kernel(int d, double p, bint is_log, double r, s, gl_x, gl_w, double sphere_lower):
    cdef const double[::1] sv = np.ascontiguousarray(s, dtype=np.float64).ravel()
    cdef const double[::1] xv = np.ascontiguousarray(gl_x, dtype=np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(gl_w, dtype=np.float64)
    cdef Py_ssize_t ns = sv.shape[0]
    cdef Py_ssize_t ng = xv.shape[0]
    out = np.empty(ns, dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i, k
    cdef int j, lev
    cdef double si, delta, d2, rs, x, theta_star, hi, lo, half, mid, th, sh, q2, f, acc, pacc
    cdef double half_p = 0.5 * p
    # integer exponents avoid pow()
    cdef bint int_p = (not is_log) and floor(p) == p and fabs(p) < 64
    cdef int ip = <int>p if int_p else 0
    cdef double ch
    cdef double log_sigma = log(_SIGMA)
    for i in range(ns):
        si = sv[i]
        delta = fabs(r - si)
        d2 = delta * delta
        rs = r * si
        x = d2 / (2.0 * rs)
        theta_star = log1p(x + sqrt(x * (x + 2.0)))
        if theta_star > 0.0:
            f = ceil(log(M_PI / theta_star) / -log_sigma)
            if f < 0.0:
                lev = 0
            elif f > _MAX_LEVELS:
                lev = _MAX_LEVELS
            else:
                lev = <int>f
        else:
            lev = _MAX_LEVELS
        acc = 0.0
        hi = M_PI
        for j in range(lev + 1):
            lo = 0.0 if j == lev else hi * _SIGMA
            half = 0.5 * (hi - lo)
            mid = 0.5 * (hi + lo)
            pacc = 0.0
            for k in range(ng):
                th = mid + half * xv[k]
                sh = sin(0.5 * th)
                q2 = d2 + 4.0 * rs * sh * sh
                if is_log:
                    f = 0.5 * log(q2)
                elif int_p:
                    if ip % 2 == 0:
                        f = _ipow(q2, ip // 2)
                    else:
                        f = _ipow(sqrt(q2), ip)
                else:
                    f = pow(q2, half_p)
                if d != 2:
                    ch = cos(0.5 * th)
                    f *= _ipow(2.0 * sh * ch, d - 2)
                pacc += wv[k] * f
            acc += half * pacc
            hi = lo
        ov[i] = sphere_lower * acc
    return out


cdef inline double _pw(double r, double p, bint is_int, int ip) nogil:
    return _ipow(r, ip) if is_int else pow(r, p)


cdef inline double _term(double r, double p, bint is_int, int ip) nogil:
    # r^p / p, or ln r for p == 0
    if p == 0.0:
        return log(r)
    return _pw(r, p, is_int, ip) / p


cdef inline bint _small_int(double p):
    return floor(p) == p and fabs(p) < 64


def pair_energy(x, double a, double b):
    cdef const double[:, ::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0]
    cdef Py_ssize_t dim = xv.shape[1]
    cdef Py_ssize_t i, j, k
    cdef double acc = 0.0, r2, r, t
    cdef bint ia = _small_int(a), ib = _small_int(b)
    cdef int pa = <int>a if ia else 0
    cdef int pb = <int>b if ib else 0
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                r2 = 0.0
                for k in range(dim):
                    t = xv[i, k] - xv[j, k]
                    r2 += t * t
                r = sqrt(r2)
                acc += _term(r, a, ia, pa) - _term(r, b, ib, pb)
    return 2.0 * acc


def pair_energy_grad(x, double a, double b):
    cdef const double[:, ::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0]
    cdef Py_ssize_t dim = xv.shape[1]
    g = np.zeros((n, dim), dtype=np.float64)
    cdef double[:, ::1] gv = g
    cdef Py_ssize_t i, j, k
    cdef double acc = 0.0, r2, r, t, c
    cdef bint ia = _small_int(a), ib = _small_int(b)
    cdef int pa = <int>a if ia else 0
    cdef int pb = <int>b if ib else 0
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                r2 = 0.0
                for k in range(dim):
                    t = xv[i, k] - xv[j, k]
                    r2 += t * t
                r = sqrt(r2)
                acc += _term(r, a, ia, pa) - _term(r, b, ib, pb)
                c = 2.0 * (_pw(r, a - 2.0, ia, pa - 2) - _pw(r, b - 2.0, ib, pb - 2))
                for k in range(dim):
                    t = c * (xv[i, k] - xv[j, k])
                    gv[i, k] += t
                    gv[j, k] -= t
    return 2.0 * acc, g
