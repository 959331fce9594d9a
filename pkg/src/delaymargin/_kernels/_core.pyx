# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation kernels (hot inner loops).

Mirrors delaymargin._kernels._numpy exactly; see that module for the
contract. Selected automatically at import when the extension built.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport atan, cos, exp, log, sin

cnp.import_array()

BACKEND = "compiled"


def logmag(double[::1] w, double lnk, double[::1] zs, double[::1] zw,
           double[::1] ps, double[::1] pw):
    cdef Py_ssize_t i, k, nw = w.shape[0], m = zs.shape[0], n = ps.shape[0]
    cdef double acc, d
    out = np.empty(nw, dtype=np.float64)
    cdef double[::1] o = out
    for i in range(nw):
        acc = lnk
        for k in range(m):
            d = w[i] - zw[k]
            acc += 0.5 * log(zs[k] * zs[k] + d * d)
        for k in range(n):
            d = w[i] - pw[k]
            acc -= 0.5 * log(ps[k] * ps[k] + d * d)
        o[i] = acc
    return out


def logmag_d1(double[::1] w, double[::1] zs, double[::1] zw,
              double[::1] ps, double[::1] pw):
    cdef Py_ssize_t i, k, nw = w.shape[0], m = zs.shape[0], n = ps.shape[0]
    cdef double acc, d
    out = np.empty(nw, dtype=np.float64)
    cdef double[::1] o = out
    for i in range(nw):
        acc = 0.0
        for k in range(m):
            d = w[i] - zw[k]
            acc += d / (zs[k] * zs[k] + d * d)
        for k in range(n):
            d = w[i] - pw[k]
            acc -= d / (ps[k] * ps[k] + d * d)
        o[i] = acc
    return out


def logmag_d2(double[::1] w, double[::1] zs, double[::1] zw,
              double[::1] ps, double[::1] pw):
    cdef Py_ssize_t i, k, nw = w.shape[0], m = zs.shape[0], n = ps.shape[0]
    cdef double acc, d, g
    out = np.empty(nw, dtype=np.float64)
    cdef double[::1] o = out
    for i in range(nw):
        acc = 0.0
        for k in range(m):
            d = w[i] - zw[k]
            g = zs[k] * zs[k] + d * d
            acc += (zs[k] * zs[k] - d * d) / (g * g)
        for k in range(n):
            d = w[i] - pw[k]
            g = ps[k] * ps[k] + d * d
            acc -= (ps[k] * ps[k] - d * d) / (g * g)
        o[i] = acc
    return out


def argsum(double[::1] w, double[::1] zs, double[::1] zw,
           double[::1] ps, double[::1] pw):
    cdef Py_ssize_t i, k, nw = w.shape[0], m = zs.shape[0], n = ps.shape[0]
    cdef double acc
    out = np.empty(nw, dtype=np.float64)
    cdef double[::1] o = out
    for i in range(nw):
        acc = 0.0
        for k in range(m):
            acc += atan((w[i] - zw[k]) / zs[k])
        for k in range(n):
            acc -= atan((w[i] - pw[k]) / ps[k])
        o[i] = acc
    return out


def argsum_d1(double[::1] w, double[::1] zs, double[::1] zw,
              double[::1] ps, double[::1] pw):
    cdef Py_ssize_t i, k, nw = w.shape[0], m = zs.shape[0], n = ps.shape[0]
    cdef double acc, d
    out = np.empty(nw, dtype=np.float64)
    cdef double[::1] o = out
    for i in range(nw):
        acc = 0.0
        for k in range(m):
            d = w[i] - zw[k]
            acc += zs[k] / (zs[k] * zs[k] + d * d)
        for k in range(n):
            d = w[i] - pw[k]
            acc -= ps[k] / (ps[k] * ps[k] + d * d)
        o[i] = acc
    return out


def argsum_d2(double[::1] w, double[::1] zs, double[::1] zw,
              double[::1] ps, double[::1] pw):
    cdef Py_ssize_t i, k, nw = w.shape[0], m = zs.shape[0], n = ps.shape[0]
    cdef double acc, d, g
    out = np.empty(nw, dtype=np.float64)
    cdef double[::1] o = out
    for i in range(nw):
        acc = 0.0
        for k in range(m):
            d = w[i] - zw[k]
            g = zs[k] * zs[k] + d * d
            acc -= 2.0 * zs[k] * d / (g * g)
        for k in range(n):
            d = w[i] - pw[k]
            g = ps[k] * ps[k] + d * d
            acc += 2.0 * ps[k] * d / (g * g)
        o[i] = acc
    return out


cdef inline double complex _div_factor(double complex acc, double complex den) nogil:
    # acc / den via the conjugate reciprocal; avoids the slow libgcc
    # complex-division path (magnitudes here are moderate by construction)
    cdef double d2 = den.real * den.real + den.imag * den.imag
    return acc * (den.real / d2 - 1j * (den.imag / d2))


def rational_eval(double complex[::1] s, double gain,
                  double complex[::1] zeros, double complex[::1] poles):
    cdef Py_ssize_t i, k, ns = s.shape[0], m = zeros.shape[0], n = poles.shape[0]
    cdef Py_ssize_t top = m if m > n else n
    cdef double complex acc
    out = np.empty(ns, dtype=np.complex128)
    cdef double complex[::1] o = out
    for i in range(ns):
        acc = gain
        for k in range(top):
            if k < m:
                acc = acc * (s[i] - zeros[k])
            if k < n:
                acc = _div_factor(acc, s[i] - poles[k])
        o[i] = acc
    return out


def charfun(double complex[::1] s, double h, double gain,
            double complex[::1] zeros, double complex[::1] poles):
    cdef Py_ssize_t i, k, ns = s.shape[0], m = zeros.shape[0], n = poles.shape[0]
    cdef Py_ssize_t top = m if m > n else n
    cdef double complex acc
    cdef double er, phase
    out = np.empty(ns, dtype=np.complex128)
    cdef double complex[::1] o = out
    for i in range(ns):
        acc = gain
        for k in range(top):
            if k < m:
                acc = acc * (s[i] - zeros[k])
            if k < n:
                acc = _div_factor(acc, s[i] - poles[k])
        er = exp(-h * s[i].real)
        phase = -h * s[i].imag
        o[i] = 1.0 + acc * (er * cos(phase) + 1j * er * sin(phase))
    return out
