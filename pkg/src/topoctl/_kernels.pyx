# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops. Semantics must match ``_kernels_py`` exactly."""

from libc.math cimport fabs, fmod, M_PI
from libc.stdlib cimport malloc, free

import numpy as np

cdef double TWO_PI = 2.0 * M_PI


cdef double _max_gap(double* a, Py_ssize_t n) nogil:
    cdef Py_ssize_t i
    cdef double g, best
    if n < 2:
        return TWO_PI
    best = a[0] + TWO_PI - a[n - 1]
    for i in range(1, n):
        g = a[i] - a[i - 1]
        if g > best:
            best = g
    return best


def max_gap(const double[::1] angles):
    return _max_gap(<double*>&angles[0], angles.shape[0]) if angles.shape[0] else TWO_PI


def discover_count(const long long[::1] levels, const double[::1] angles,
                   double alpha, double tol, long long min_level):
    cdef Py_ssize_t n = levels.shape[0]
    cdef Py_ssize_t m = 0, i = 0, j, k
    cdef long long lvl
    cdef double x
    cdef double* buf
    if n == 0:
        return 0, -1
    buf = <double*>malloc(n * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    try:
        while i < n:
            lvl = levels[i] if levels[i] > min_level else min_level
            while i < n and (levels[i] if levels[i] > min_level else min_level) == lvl:
                x = angles[i]
                k = m
                while k > 0 and buf[k - 1] > x:
                    buf[k] = buf[k - 1]
                    k -= 1
                buf[k] = x
                m += 1
                i += 1
            if _max_gap(buf, m) <= alpha + tol:
                return m, lvl
        return n, -1
    finally:
        free(buf)


cdef inline double _angdist(double a, double b) nogil:
    cdef double d = fabs(a - b)
    d = fmod(d, TWO_PI)
    if d > M_PI:
        d = TWO_PI - d
    return d


cdef inline bint _eid_less(double l1, long long h1, long long o1,
                           double l2, long long h2, long long o2) nogil:
    if l1 != l2:
        return l1 < l2
    if h1 != h2:
        return h1 < h2
    return o1 < o2


def redundant_flags(const double[::1] angles, const double[::1] lengths,
                    const long long[::1] his, const long long[::1] los, double limit):
    cdef Py_ssize_t n = angles.shape[0], i, j
    out = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[::1] flags = out
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if _angdist(angles[i], angles[j]) < limit and _eid_less(
                lengths[j], his[j], los[j], lengths[i], his[i], los[i]
            ):
                flags[i] = 1
                break
    return out
