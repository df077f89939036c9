"""Validation grid search for bandwidth and regularization, both methods.

Both classifiers are tuned the same way: hold out a stratified validation
slice of the training set, sweep a sigma x lambda grid, pick the pair with
the best validation accuracy (first in grid order on ties), then refit on
the full training set.
"""

from __future__ import annotations

import numpy as np

from . import baseline as bl
from .classifier import LabelScheme, evaluate, train_multiclass
from .data import Dataset, split
from .integral_operator import identity_eigensystem, operator_eigensystem
from .scalar_kernel import ScalarKernelParams, gram_matrix, median_sigma
from .solver import RegularizationConfig, build_kronecker_eigen

DEFAULT_SIGMA_FACTORS = (0.5, 1.0, 2.0)
DEFAULT_LAMBDAS = (1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0)


def _grids(base_sigma, sigma_grid, lambda_grid):
    if sigma_grid is None:
        sigma_grid = [f * base_sigma for f in DEFAULT_SIGMA_FACTORS]
    if lambda_grid is None:
        lambda_grid = list(DEFAULT_LAMBDAS)
    return list(sigma_grid), list(lambda_grid)


def tune_functional(
    train: Dataset,
    k: int,
    scheme: LabelScheme,
    kernel_kind: str = "gaussian",
    sigma_grid=None,
    lambda_grid=None,
    val_fraction: float = 0.25,
    seed: int = 0,
    operator: str = "exponential-integral",
):
    """Returns (ScalarKernelParams, lambda, trials) for the functional method."""
    sigma_grid, lambda_grid = _grids(
        median_sigma(train.observations), sigma_grid, lambda_grid
    )
    fit, val = split(train, 1.0 - val_fraction, seed)
    if operator == "identity":
        op = identity_eigensystem(train.grid)
    else:
        op = operator_eigensystem(k, train.grid)
    best, trials = None, []
    for sigma in sigma_grid:
        params = ScalarKernelParams(kernel_kind, sigma)
        ke = build_kronecker_eigen(gram_matrix(fit.observations, params), op)
        for lam in lambda_grid:
            model = train_multiclass(
                fit, RegularizationConfig(lam, k), params, scheme, ke=ke
            )
            acc = evaluate(model, val).accuracy
            trials.append({"sigma": sigma, "lambda": lam, "val_accuracy": acc})
            if best is None or acc > best[0]:
                best = (acc, sigma, lam)
    _, sigma, lam = best
    return ScalarKernelParams(kernel_kind, sigma), lam, trials


def tune_baseline(
    train: Dataset,
    sigma_grid=None,
    lambda_grid=None,
    val_fraction: float = 0.25,
    seed: int = 0,
):
    """Returns (sigma, lambda, trials) for the scalar RLSC baseline."""
    vd_all = bl.vectorize(train)
    sigma_grid, lambda_grid = _grids(
        bl.median_sigma_euclidean(vd_all.rows), sigma_grid, lambda_grid
    )
    fit, val = split(train, 1.0 - val_fraction, seed)
    vd_fit = bl.vectorize(fit)
    best, trials = None, []
    for sigma in sigma_grid:
        for lam in lambda_grid:
            model = bl.train_rlsc(vd_fit, sigma, lam)
            acc = bl.evaluate_rlsc(model, val).accuracy
            trials.append({"sigma": sigma, "lambda": lam, "val_accuracy": acc})
            if best is None or acc > best[0]:
                best = (acc, sigma, lam)
    _, sigma, lam = best
    return sigma, lam, trials
