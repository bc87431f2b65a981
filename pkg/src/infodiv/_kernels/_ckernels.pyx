# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled entropy kernels.

All sums use Neumaier compensated accumulation. Inputs are C-contiguous
float64 arrays that have already been validated as probability tables;
entries <= 0 contribute nothing (0 ln 0 = 0).
"""
from libc.math cimport log, fabs
from libc.stdlib cimport malloc, calloc, free

import numpy as np


cdef inline void _acc(double* s, double* c, double x) noexcept nogil:
    cdef double t = s[0] + x
    if fabs(s[0]) >= fabs(x):
        c[0] += (s[0] - t) + x
    else:
        c[0] += (x - t) + s[0]
    s[0] = t


cdef double _entropy(const double* p, Py_ssize_t n) noexcept nogil:
    cdef double s = 0.0, c = 0.0, v
    cdef Py_ssize_t i
    for i in range(n):
        v = p[i]
        if v > 0.0:
            _acc(&s, &c, -v * log(v))
    return s + c


cdef void _pair(const double* p, Py_ssize_t a, Py_ssize_t b, double* out) noexcept nogil:
    # out <- (H(X), H(Y), H(X,Y)); p is row-major a x b
    cdef double* rs = <double*> calloc(a * 2, sizeof(double))
    cdef double* cs = <double*> calloc(b * 2, sizeof(double))
    cdef double* rows = <double*> malloc(a * sizeof(double))
    cdef double* cols = <double*> malloc(b * sizeof(double))
    cdef Py_ssize_t i, j
    cdef double v
    for i in range(a):
        for j in range(b):
            v = p[i * b + j]
            _acc(&rs[2 * i], &rs[2 * i + 1], v)
            _acc(&cs[2 * j], &cs[2 * j + 1], v)
    for i in range(a):
        rows[i] = rs[2 * i] + rs[2 * i + 1]
    for j in range(b):
        cols[j] = cs[2 * j] + cs[2 * j + 1]
    out[0] = _entropy(rows, a)
    out[1] = _entropy(cols, b)
    out[2] = _entropy(p, a * b)
    free(rs)
    free(cs)
    free(rows)
    free(cols)


cdef void _triple(const double* p, Py_ssize_t a, Py_ssize_t b, Py_ssize_t c,
                  double* out) noexcept nogil:
    # out <- (H(X), H(Y), H(Z), H(X,Y), H(X,Z), H(Y,Z), H(X,Y,Z))
    cdef double* xy = <double*> calloc(a * b * 2, sizeof(double))
    cdef double* xz = <double*> calloc(a * c * 2, sizeof(double))
    cdef double* yz = <double*> calloc(b * c * 2, sizeof(double))
    cdef double* fxy = <double*> malloc(a * b * sizeof(double))
    cdef double* fxz = <double*> malloc(a * c * sizeof(double))
    cdef double* fyz = <double*> malloc(b * c * sizeof(double))
    cdef double tmp[3]
    cdef Py_ssize_t i, j, k, n
    cdef double v
    for i in range(a):
        for j in range(b):
            for k in range(c):
                v = p[(i * b + j) * c + k]
                n = i * b + j
                _acc(&xy[2 * n], &xy[2 * n + 1], v)
                n = i * c + k
                _acc(&xz[2 * n], &xz[2 * n + 1], v)
                n = j * c + k
                _acc(&yz[2 * n], &yz[2 * n + 1], v)
    for n in range(a * b):
        fxy[n] = xy[2 * n] + xy[2 * n + 1]
    for n in range(a * c):
        fxz[n] = xz[2 * n] + xz[2 * n + 1]
    for n in range(b * c):
        fyz[n] = yz[2 * n] + yz[2 * n + 1]
    _pair(fxy, a, b, tmp)
    out[0] = tmp[0]
    out[1] = tmp[1]
    out[3] = tmp[2]
    _pair(fxz, a, c, tmp)
    out[2] = tmp[1]
    out[4] = tmp[2]
    out[5] = _entropy(fyz, b * c)
    out[6] = _entropy(p, a * b * c)
    free(xy)
    free(xz)
    free(yz)
    free(fxy)
    free(fxz)
    free(fyz)


def entropy_flat(const double[::1] p):
    return _entropy(&p[0], p.shape[0])


def pair_entropies(const double[:, ::1] p):
    cdef double out[3]
    _pair(&p[0, 0], p.shape[0], p.shape[1], out)
    return out[0], out[1], out[2]


def triple_entropies(const double[:, :, ::1] p):
    cdef double out[7]
    _triple(&p[0, 0, 0], p.shape[0], p.shape[1], p.shape[2], out)
    return out[0], out[1], out[2], out[3], out[4], out[5], out[6]


def batch_pair_entropies(const double[:, :, ::1] p):
    cdef Py_ssize_t n = p.shape[0], a = p.shape[1], b = p.shape[2], t
    result = np.empty((n, 3), dtype=np.float64)
    cdef double[:, ::1] r = result
    if n == 0:
        return result
    with nogil:
        for t in range(n):
            _pair(&p[t, 0, 0], a, b, &r[t, 0])
    return result


def batch_triple_entropies(const double[:, :, :, ::1] p):
    cdef Py_ssize_t n = p.shape[0], a = p.shape[1], b = p.shape[2], c = p.shape[3], t
    result = np.empty((n, 7), dtype=np.float64)
    cdef double[:, ::1] r = result
    if n == 0:
        return result
    with nogil:
        for t in range(n):
            _triple(&p[t, 0, 0, 0], a, b, c, &r[t, 0])
    return result
