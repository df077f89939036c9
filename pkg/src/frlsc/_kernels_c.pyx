# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot numerical kernels.

Same contracts as frlsc._kernels_py; selected at import by frlsc._backend.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, fabs

cnp.import_array()


def pairwise_sqdist(X, w):
    """Weighted squared distances between all rows of X (n, p, m)."""
    cdef const double[:, :, ::1] x = np.ascontiguousarray(X, dtype=np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0], p = x.shape[1], m = x.shape[2]
    out = np.zeros((n, n), dtype=np.float64)
    cdef double[:, ::1] d = out
    cdef Py_ssize_t i, j, c, t
    cdef double acc, diff
    for i in range(n):
        for j in range(i + 1, n):
            acc = 0.0
            for c in range(p):
                for t in range(m):
                    diff = x[i, c, t] - x[j, c, t]
                    acc += wv[t] * diff * diff
            d[i, j] = acc
            d[j, i] = acc
    return out


def cross_sqdist(A, B, w):
    """Weighted squared distances between rows of A (na,p,m) and B (nb,p,m)."""
    cdef const double[:, :, ::1] a = np.ascontiguousarray(A, dtype=np.float64)
    cdef const double[:, :, ::1] b = np.ascontiguousarray(B, dtype=np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef Py_ssize_t na = a.shape[0], nb = b.shape[0], p = a.shape[1], m = a.shape[2]
    out = np.zeros((na, nb), dtype=np.float64)
    cdef double[:, ::1] d = out
    cdef Py_ssize_t i, j, c, t
    cdef double acc, diff
    for i in range(na):
        for j in range(nb):
            acc = 0.0
            for c in range(p):
                for t in range(m):
                    diff = a[i, c, t] - b[j, c, t]
                    acc += wv[t] * diff * diff
            d[i, j] = acc
    return out


def apply_exp_kernel(points, w, Y):
    """Trapezoid action of exp(-|t-s|) on each row of Y (q, m)."""
    cdef const double[::1] t = np.ascontiguousarray(points, dtype=np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef const double[:, ::1] y = np.ascontiguousarray(Y, dtype=np.float64)
    cdef Py_ssize_t m = y.shape[1]
    # build the weighted kernel matrix in C (m*m exp calls), then hand the
    # dense multiply to BLAS; kv[b, a] = exp(-|t_a - t_b|) * w[b]
    kmat = np.empty((m, m), dtype=np.float64)
    cdef double[:, ::1] kv = kmat
    cdef Py_ssize_t a, b
    for b in range(m):
        for a in range(m):
            kv[b, a] = exp(-fabs(t[a] - t[b])) * wv[b]
    return np.asarray(y) @ kmat
