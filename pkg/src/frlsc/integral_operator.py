"""The integral operator (Ty)(t) = int_0^1 exp(-|t-s|) y(s) ds on [0,1].

Analytic eigenpairs come from the transcendental condition
cot(mu) = (mu - 1/mu)/2; its roots are found by bisection on the pole-free
equivalent form g(mu) = 2*mu*cos(mu) - (mu^2 - 1)*sin(mu), one root per
interval ((i-1)*pi, i*pi). Eigenvalues are delta_i = 2/(1 + mu_i^2) and
eigenfunctions mu_i*cos(mu_i t) + sin(mu_i t), L2-normalized on the grid.

A discretized quadrature form of T doubles as prediction machinery and as
the independent oracle for the spectral solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import NumericError
from .function_space import Grid, SampledFunction

_BISECT_MAX_ITER = 200


def _g(mu: float) -> float:
    return 2.0 * mu * math.cos(mu) - (mu * mu - 1.0) * math.sin(mu)


def find_mu_roots(k: int) -> np.ndarray:
    """The k smallest positive roots of cot(mu) = (mu - 1/mu)/2, ascending."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    roots = np.empty(k)
    for i in range(1, k + 1):
        # g(0) = 0 is not a valid root; nudge the first bracket off zero.
        lo = (i - 1) * math.pi if i > 1 else 1e-9
        hi = i * math.pi
        glo, ghi = _g(lo), _g(hi)
        if glo * ghi >= 0:
            raise NumericError(
                f"no sign change for root {i} on [{lo:.6g}, {hi:.6g}]: "
                f"g(lo)={glo:.3g}, g(hi)={ghi:.3g}"
            )
        for _ in range(_BISECT_MAX_ITER):
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break
            gmid = _g(mid)
            if gmid == 0.0:
                lo = hi = mid
                break
            if glo * gmid < 0:
                hi, ghi = mid, gmid
            else:
                lo, glo = mid, gmid
        roots[i - 1] = lo if abs(_g(lo)) <= abs(_g(hi)) else hi
    return roots


def eigenvalues_from_mu(mu: np.ndarray) -> np.ndarray:
    return 2.0 / (1.0 + np.asarray(mu) ** 2)


@dataclass(frozen=True)
class OperatorEigen:
    """Truncated eigensystem of an operator on L2([0,1]), sampled on a grid.

    kind is "exponential-integral" for T above or "identity" for the
    baseline-parity escape hatch (delta all ones, grid-delta eigenbasis).
    """

    grid: Grid
    mu: np.ndarray        # (k,) roots; empty for the identity operator
    delta: np.ndarray     # (k,) eigenvalues
    w: np.ndarray         # (k, m) sampled eigenfunctions, L2-normalized
    kind: str = "exponential-integral"

    @property
    def k(self) -> int:
        return self.delta.size


def operator_eigensystem(k: int, grid: Grid) -> OperatorEigen:
    """The k leading analytic eigenpairs of T, sampled and L2-normalized."""
    mu = find_mu_roots(k)
    delta = eigenvalues_from_mu(mu)
    t = grid.points
    w = mu[:, None] * np.cos(mu[:, None] * t) + np.sin(mu[:, None] * t)
    norms = np.sqrt((w * w) @ grid.weights)
    w = w / norms[:, None]
    return OperatorEigen(grid=grid, mu=mu, delta=delta, w=w)


def identity_eigensystem(grid: Grid) -> OperatorEigen:
    """Identity-operator escape hatch: full grid-delta eigenbasis, k = m."""
    wts = grid.weights
    w = np.diag(1.0 / np.sqrt(wts))
    return OperatorEigen(
        grid=grid,
        mu=np.empty(0),
        delta=np.ones(grid.m),
        w=w,
        kind="identity",
    )


def apply_T_quadrature(y: SampledFunction) -> SampledFunction:
    """Trapezoid discretization of (Ty)(t) = int exp(-|t-s|) y(s) ds."""
    out = _backend.apply_exp_kernel(
        y.grid.points, y.grid.weights, y.values[None, :]
    )
    return SampledFunction(y.grid, out[0])


def apply_T_values(grid: Grid, Y: np.ndarray) -> np.ndarray:
    """apply_T_quadrature on each row of a (q, m) value array."""
    return _backend.apply_exp_kernel(grid.points, grid.weights, np.atleast_2d(Y))


def dense_T_matrix(grid: Grid) -> np.ndarray:
    """Matrix D with D @ y.values == apply_T_quadrature(y).values exactly.

    D[a, b] = exp(-|t_a - t_b|) * weight[b]; used by test oracles and the
    brute-force solver only.
    """
    t = grid.points
    E = np.exp(-np.abs(t[:, None] - t[None, :]))
    return E * grid.weights[None, :]
