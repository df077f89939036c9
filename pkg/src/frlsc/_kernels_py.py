"""Pure-numpy implementations of the hot numerical kernels.

Fallback backend used when the compiled extension is unavailable (or when
FRLSC_BACKEND=python). Same contracts as frlsc._kernels_c.
"""

import numpy as np


def pairwise_sqdist(X, w):
    """Weighted squared distances between all rows of X.

    X: (n, p, m) curve values, w: (m,) quadrature weights.
    Returns the symmetric (n, n) matrix of sum_c sum_t w[t]*(X[i]-X[j])**2,
    with an exactly zero diagonal and bit-exact symmetry.
    """
    X = np.asarray(X, dtype=float)
    w = np.asarray(w, dtype=float)
    n = X.shape[0]
    Xw = X * w
    sq = np.einsum("ipm,ipm->i", Xw, X)
    cross = np.einsum("ipm,jpm->ij", Xw, X)
    D = sq[:, None] + sq[None, :] - 2.0 * cross
    D = np.triu(D, k=1)
    D = np.maximum(D, 0.0)
    D = D + D.T
    np.fill_diagonal(D, 0.0)
    return D


def cross_sqdist(A, B, w):
    """Weighted squared distances between rows of A (na,p,m) and B (nb,p,m)."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    w = np.asarray(w, dtype=float)
    Aw = A * w
    sa = np.einsum("ipm,ipm->i", Aw, A)
    sb = np.einsum("ipm,ipm->i", B * w, B)
    cross = np.einsum("ipm,jpm->ij", Aw, B)
    D = sa[:, None] + sb[None, :] - 2.0 * cross
    return np.maximum(D, 0.0)


def apply_exp_kernel(points, w, Y):
    """Trapezoid action of the kernel exp(-|t-s|) on each row of Y.

    points: (m,) grid nodes, w: (m,) quadrature weights, Y: (q, m).
    Returns (q, m) with out[r, a] = sum_b exp(-|t_a - t_b|) * w[b] * Y[r, b].
    """
    points = np.asarray(points, dtype=float)
    E = np.exp(-np.abs(points[:, None] - points[None, :]))
    return np.asarray(Y, dtype=float) @ (E * np.asarray(w, dtype=float)[:, None])
