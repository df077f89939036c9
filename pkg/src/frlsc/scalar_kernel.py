"""Scalar kernel G over functional inputs and its dense Gram eigensystem."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import NumericError, StructuralError
from .function_space import FunctionalObservation, l2p_distance_sq

KERNEL_KINDS = ("gaussian", "laplacian-l2")


@dataclass(frozen=True)
class ScalarKernelParams:
    kind: str = "gaussian"
    sigma: float = 1.0

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")


@dataclass(frozen=True)
class GramEigen:
    """Eigendecomposition of a Gram matrix, eigenvalues descending."""

    alpha: np.ndarray     # (n,) eigenvalues, descending
    vectors: np.ndarray   # (n, n) orthonormal columns

    @property
    def n(self) -> int:
        return self.alpha.size


def _kernel_from_sqdist(d2: np.ndarray, params: ScalarKernelParams) -> np.ndarray:
    if params.kind == "gaussian":
        return np.exp(-d2 / (2.0 * params.sigma**2))
    return np.exp(-np.sqrt(np.maximum(d2, 0.0)) / params.sigma)


def eval_scalar_kernel(
    a: FunctionalObservation, b: FunctionalObservation, params: ScalarKernelParams
) -> float:
    """G(a, b) from the (L2)^p distance between the observations."""
    d2 = l2p_distance_sq(a, b)
    return float(_kernel_from_sqdist(np.asarray(d2), params))


def _stack(data) -> np.ndarray:
    arrs = [obs.as_array() for obs in data]
    p = arrs[0].shape[0]
    if any(a.shape != arrs[0].shape for a in arrs):
        raise StructuralError("observations differ in channel count or grid")
    return np.stack(arrs)


def gram_matrix(data, params: ScalarKernelParams) -> np.ndarray:
    """Dense symmetric Gram matrix G(x_i, x_j); unit diagonal by construction."""
    if len(data) == 0:
        raise ValueError("gram_matrix needs at least one observation")
    X = _stack(data)
    w = data[0].grid.weights
    d2 = _backend.pairwise_sqdist(X, w)
    K = _kernel_from_sqdist(d2, params)
    np.fill_diagonal(K, 1.0)
    return K


def cross_gram(test, train, params: ScalarKernelParams) -> np.ndarray:
    """Rectangular kernel matrix G(test_i, train_j)."""
    A, B = _stack(test), _stack(train)
    if A.shape[1:] != B.shape[1:]:
        raise StructuralError("test and train observations are incompatible")
    d2 = _backend.cross_sqdist(A, B, train[0].grid.weights)
    return _kernel_from_sqdist(d2, params)


def sym_eigen(M: np.ndarray, symmetry_tol: float = 1e-10) -> GramEigen:
    """Dense symmetric eigendecomposition, eigenvalues sorted descending."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    scale = max(np.abs(M).max(), 1.0)
    if np.abs(M - M.T).max() > symmetry_tol * scale:
        raise ValueError("matrix is not symmetric within tolerance")
    try:
        alpha, vectors = np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"symmetric eigensolve failed: {exc}") from exc
    order = np.argsort(alpha)[::-1]
    return GramEigen(alpha=alpha[order], vectors=vectors[:, order])


def median_sigma(data, fallback: float = 1.0) -> float:
    """Median pairwise (L2)^p distance; the default bandwidth heuristic."""
    X = _stack(data)
    d2 = _backend.pairwise_sqdist(X, data[0].grid.weights)
    off = d2[np.triu_indices(len(data), k=1)]
    if off.size == 0:
        return fallback
    med = float(np.sqrt(np.median(off)))
    return med if med > 0 else fallback
