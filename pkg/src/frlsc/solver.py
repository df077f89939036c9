"""Spectral training and prediction for functional RLSC.

The block operator Gram matrix of a separable kernel K = G*T is the
Kronecker product of the scalar Gram matrix and T, so its eigenpairs are
products alpha_i*delta_j with factored eigenfunctions (v_i, w_j). The
regularized system (gram (x) T + lambda*I) beta = y is solved entirely in
that spectral basis; nothing of size (n*m) x (n*m) is ever materialized
outside the brute-force oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import StructuralError
from .function_space import FunctionalObservation, Grid, SampledFunction
from .integral_operator import OperatorEigen, apply_T_values, dense_T_matrix
from .scalar_kernel import (
    GramEigen,
    ScalarKernelParams,
    cross_gram,
    gram_matrix,
    sym_eigen,
)

BRUTE_FORCE_MAX_SIZE = 4000


@dataclass(frozen=True)
class RegularizationConfig:
    lam: float
    k: int = 8

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"lambda must be positive, got {self.lam}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")


@dataclass(frozen=True)
class KroneckerEigen:
    """Factored eigensystem of gram (x) T; eigenfunctions stay as (v, w) pairs."""

    gram: GramEigen
    op: OperatorEigen
    theta: np.ndarray = field(init=False)  # (n, k), theta[i, j] = alpha_i * delta_j

    def __post_init__(self):
        alpha = np.maximum(self.gram.alpha, 0.0)  # clamp round-off negatives
        object.__setattr__(self, "theta", np.outer(alpha, self.op.delta))


def build_kronecker_eigen(gram: np.ndarray, op: OperatorEigen) -> KroneckerEigen:
    return KroneckerEigen(gram=sym_eigen(gram), op=op)


def _values_matrix(yv, grid: Grid) -> np.ndarray:
    for y in yv:
        if y.grid != grid:
            raise StructuralError("label function grid does not match model grid")
    return np.stack([y.values for y in yv])


def solve_beta_values(Y: np.ndarray, ke: KroneckerEigen, lam: float) -> np.ndarray:
    """Spectral solve of (gram (x) T + lam*I) beta = y for stacked rows Y (n, m)."""
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    n = ke.gram.n
    if Y.shape != (n, ke.op.grid.m):
        raise StructuralError(
            f"label matrix shape {Y.shape} does not match n={n}, m={ke.op.grid.m}"
        )
    V = ke.gram.vectors
    W = ke.op.w
    wts = ke.op.grid.weights
    # coefficients c_{ij} = sum_l v_i[l] <w_j, y_l>
    P = (Y * wts) @ W.T                      # (n, k)
    C = V.T @ P                              # (n, k)
    return V @ (C / (ke.theta + lam)) @ W    # (n, m)


def solve_beta(yv, ke: KroneckerEigen, lam: float):
    """List-of-SampledFunction front end for solve_beta_values."""
    grid = ke.op.grid
    B = solve_beta_values(_values_matrix(yv, grid), ke, lam)
    return [SampledFunction(grid, row) for row in B]


def discarded_energy_ratio(Y: np.ndarray, op: OperatorEigen) -> float:
    """Fraction of label energy outside span(w_1..w_k); Algorithm tail diagnostic."""
    wts = op.grid.weights
    total = float(np.sum((Y * Y) @ wts))
    if total == 0.0:
        return 0.0
    captured = float(np.sum(((Y * wts) @ op.w.T) ** 2))
    return max(0.0, 1.0 - captured / total)


@dataclass
class TrainedModel:
    """One binary functional RLSC model: inputs, coefficient functions, config."""

    train_inputs: list
    beta: list                      # n SampledFunctions
    lam: float
    params: ScalarKernelParams
    op_eigen: OperatorEigen
    grid: Grid
    tbeta: np.ndarray = field(init=False)  # (n, m) rows (T beta_j) for prediction

    def __post_init__(self):
        if len(self.beta) != len(self.train_inputs):
            raise StructuralError("beta count does not match training inputs")
        B = _values_matrix(self.beta, self.grid)
        if self.op_eigen.kind == "identity":
            self.tbeta = B
        else:
            self.tbeta = apply_T_values(self.grid, B)

    @property
    def n(self) -> int:
        return len(self.train_inputs)

    @property
    def k(self) -> int:
        return self.op_eigen.k


def train_functional(
    data,
    Y: np.ndarray,
    config: RegularizationConfig,
    params: ScalarKernelParams,
    op_eigen: OperatorEigen,
    ke: KroneckerEigen | None = None,
) -> TrainedModel:
    """Fit one binary model; pass a prebuilt KroneckerEigen to share factors."""
    grid = data[0].grid
    if ke is None:
        ke = build_kronecker_eigen(gram_matrix(data, params), op_eigen)
    B = solve_beta_values(np.asarray(Y, dtype=float), ke, config.lam)
    beta = [SampledFunction(grid, row) for row in B]
    return TrainedModel(
        train_inputs=list(data),
        beta=beta,
        lam=config.lam,
        params=params,
        op_eigen=op_eigen,
        grid=grid,
    )


def predict_values(model: TrainedModel, xs) -> np.ndarray:
    """Stacked predictions f*(x) = sum_j G(x, x_j) (T beta_j) for each x in xs."""
    for x in xs:
        if x.grid != model.grid or x.p != model.train_inputs[0].p:
            raise StructuralError("observation incompatible with model")
    G = cross_gram(xs, model.train_inputs, model.params)  # (q, n)
    return G @ model.tbeta


def predict(model: TrainedModel, x: FunctionalObservation) -> SampledFunction:
    return SampledFunction(model.grid, predict_values(model, [x])[0])


def rkhs_norm_sq(model: TrainedModel) -> float:
    """Squared RKHS norm of f* = sum_j K(., x_j) beta_j via Gram algebra."""
    G = gram_matrix(model.train_inputs, model.params)
    B = np.stack([b.values for b in model.beta])
    inner = (model.tbeta * model.grid.weights) @ B.T  # <T beta_i, beta_j>
    return float(np.sum(G * inner))


def brute_force_solve(yv, data, params: ScalarKernelParams, lam: float, grid: Grid):
    """Dense oracle: solve the fully discretized (n*m) x (n*m) system directly.

    Builds gram (x) D + lam*I with D the quadrature discretization of T.
    Test/verification use only.
    """
    n, m = len(data), grid.m
    if n * m > BRUTE_FORCE_MAX_SIZE:
        raise ValueError(f"brute-force size {n * m} exceeds {BRUTE_FORCE_MAX_SIZE}")
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    G = gram_matrix(data, params)
    D = dense_T_matrix(grid)
    A = np.kron(G, D) + lam * np.eye(n * m)
    y = _values_matrix(yv, grid).ravel()
    B = np.linalg.solve(A, y).reshape(n, m)
    return [SampledFunction(grid, row) for row in B]
