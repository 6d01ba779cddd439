# cython: language_level=3
"""Compiled hot loops.  Semantics mirror ``receptron._fallback`` exactly.

Rect membership uses the same floating point expression as the Python
code, ``fabs((x - c) / w) < 0.5``, so boundary classification is bit-exact
between the two backends.  Do not build with -ffast-math.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, INFINITY

cnp.import_array()


def rect_complement_sum(X, axes, centers, widths):
    cdef const double[:, ::1] x = np.ascontiguousarray(X, dtype=np.float64)
    cdef const long long[::1] ax = np.ascontiguousarray(axes, dtype=np.int64)
    cdef const double[::1] c = np.ascontiguousarray(centers, dtype=np.float64)
    cdef const double[::1] w = np.ascontiguousarray(widths, dtype=np.float64)
    cdef Py_ssize_t rows = x.shape[0], m = ax.shape[0], i, j
    out = np.zeros(rows, dtype=np.float64)
    cdef double[::1] o = out
    cdef double acc
    with nogil:
        for i in range(rows):
            acc = 0.0
            for j in range(m):
                if not fabs((x[i, ax[j]] - c[j]) / w[j]) < 0.5:
                    acc += 1.0
            o[i] = acc
    return out


def min_violations(X, centers, widths):
    cdef const double[:, ::1] x = np.ascontiguousarray(X, dtype=np.float64)
    cdef const double[:, ::1] c = np.ascontiguousarray(centers, dtype=np.float64)
    cdef const double[:, ::1] w = np.ascontiguousarray(widths, dtype=np.float64)
    cdef Py_ssize_t rows = x.shape[0], m = c.shape[0], n = c.shape[1]
    cdef Py_ssize_t i, d, j
    out = np.empty(rows, dtype=np.float64)
    cdef double[::1] o = out
    cdef double best, count
    with nogil:
        for i in range(rows):
            best = INFINITY
            for d in range(m):
                count = 0.0
                for j in range(n):
                    if not fabs((x[i, d * n + j] - c[d, j]) / w[d, j]) < 0.5:
                        count += 1.0
                        if count >= best:
                            break
                if count < best:
                    best = count
                    if best == 0.0:
                        break
            o[i] = best
    return out


def orbit_labels(maps):
    cdef const long long[:, ::1] g = np.ascontiguousarray(maps, dtype=np.int64)
    cdef Py_ssize_t ngroup = g.shape[0], patterns = g.shape[1]
    cdef Py_ssize_t ntables = 1 << patterns
    cdef unsigned long long mask = ntables - 1
    cdef unsigned long long table, image
    cdef Py_ssize_t r, k
    labels = np.full(ntables, -1, dtype=np.int64)
    cdef long long[::1] lab = labels
    with nogil:
        for table in range(<unsigned long long>ntables):
            if lab[table] >= 0:
                continue
            for r in range(ngroup):
                image = 0
                for k in range(patterns):
                    image |= ((table >> g[r, k]) & 1) << k
                lab[image] = table
                lab[image ^ mask] = table
    return labels
