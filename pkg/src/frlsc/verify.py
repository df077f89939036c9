"""Oracle cross-checks: each check returns its measured error and its bound.

These are the same dual-route checks the test suite runs; the CLI `verify`
command exposes them so a deployment can be sanity-checked in place.
"""

from __future__ import annotations

import numpy as np

from .function_space import FunctionalObservation, Grid, SampledFunction
from .integral_operator import (
    apply_T_values,
    dense_T_matrix,
    find_mu_roots,
    operator_eigensystem,
)
from .scalar_kernel import ScalarKernelParams, gram_matrix, sym_eigen
from .solver import (
    brute_force_solve,
    build_kronecker_eigen,
    solve_beta,
)


def random_observations(rng, n, p, grid, smooth_harmonics=5):
    """Random smooth observations: low-order Fourier curves."""
    t = grid.points
    obs = []
    for _ in range(n):
        chans = np.zeros((p, grid.m))
        for c in range(p):
            for f in range(1, smooth_harmonics + 1):
                a, b = rng.standard_normal(2) / f
                chans[c] += a * np.sin(2 * np.pi * f * t) + b * np.cos(2 * np.pi * f * t)
        obs.append(FunctionalObservation.from_array(grid, chans))
    return obs


def random_curves(rng, n, grid, smooth_harmonics=5):
    t = grid.points
    out = []
    for _ in range(n):
        v = np.zeros(grid.m)
        for f in range(1, smooth_harmonics + 1):
            a, b = rng.standard_normal(2) / f
            v += a * np.sin(2 * np.pi * f * t) + b * np.cos(2 * np.pi * f * t)
        out.append(SampledFunction(grid, v))
    return out


def check_solver_oracle(seed=0, n=3, m=31, p=2, k=20, lam=0.5, sigma=None):
    """Spectral solve vs dense brute-force solve, relative L2 per coefficient
    function (the worst of the n functions is reported)."""
    rng = np.random.default_rng(seed)
    grid = Grid.uniform(m)
    data = random_observations(rng, n, p, grid)
    yv = random_curves(rng, n, grid)
    if sigma is None:
        from .scalar_kernel import median_sigma

        sigma = median_sigma(data)
    params = ScalarKernelParams("gaussian", sigma)
    op = operator_eigensystem(k, grid)
    ke = build_kronecker_eigen(gram_matrix(data, params), op)
    fast = solve_beta(yv, ke, lam)
    slow = brute_force_solve(yv, data, params, lam, grid)
    w = grid.weights
    errs = []
    for bf, bs in zip(fast, slow):
        diff = bf.values - bs.values
        num = np.sqrt((diff * diff) @ w)
        den = np.sqrt(max((bs.values * bs.values) @ w, 1e-300))
        errs.append(num / den)
    measured = float(max(errs))
    return {
        "name": "solver-vs-brute-force",
        "measured": measured,
        "bound": 1e-3,
        "passed": bool(measured <= 1e-3),
    }


def check_root_residuals(k=5, bound=1e-12):
    """|g(mu_i)| residuals of the transcendental root equation."""
    mu = find_mu_roots(k)
    g = 2 * mu * np.cos(mu) - (mu**2 - 1) * np.sin(mu)
    worst = float(np.abs(g).max())
    return {
        "name": f"mu-root-residuals(k={k})",
        "measured": worst,
        "bound": bound,
        "passed": worst <= bound,
    }


def check_spectral_consistency(k=5, m=401):
    """||T w_i - delta_i w_i|| / delta_i via the quadrature oracle."""
    grid = Grid.uniform(m)
    op = operator_eigensystem(k, grid)
    Tw = apply_T_values(grid, op.w)
    resid = Tw - op.delta[:, None] * op.w
    norms = np.sqrt((resid * resid) @ grid.weights)
    rel = norms / op.delta
    worst = float(rel.max())
    return {
        "name": f"spectral-consistency(k={k},m={m})",
        "measured": worst,
        "bound": 1e-3,
        "passed": worst <= 1e-3,
    }


def check_gram_psd(seed=0, n=16, p=2, m=51):
    rng = np.random.default_rng(seed)
    grid = Grid.uniform(m)
    data = random_observations(rng, n, p, grid)
    G = gram_matrix(data, ScalarKernelParams("gaussian", 0.7))
    eig = sym_eigen(G)
    measured = float(eig.alpha.min())
    bound = -1e-8 * float(eig.alpha.max())
    return {
        "name": "gram-psd",
        "measured": measured,
        "bound": bound,
        "passed": measured >= bound,
    }


def check_block_gram_psd(seed=0, n=8, p=2, m=41):
    """PSD of the matrix <K(x_i,x_j) y_i, y_j> for random inputs and labels."""
    rng = np.random.default_rng(seed)
    grid = Grid.uniform(m)
    data = random_observations(rng, n, p, grid)
    ys = random_curves(rng, n, grid)
    G = gram_matrix(data, ScalarKernelParams("gaussian", 0.7))
    Y = np.stack([y.values for y in ys])
    TY = apply_T_values(grid, Y)
    inner = (TY * grid.weights) @ Y.T
    M = G * inner
    M = 0.5 * (M + M.T)
    eig = sym_eigen(M)
    measured = float(eig.alpha.min())
    bound = -1e-8 * max(float(eig.alpha.max()), 1e-300)
    return {
        "name": "block-gram-psd",
        "measured": measured,
        "bound": bound,
        "passed": measured >= bound,
    }


def check_reproducing_property(seed=0, n=5, p=2, m=81):
    """<K(x,.)y, f>_F == <f(x), y> for f in the span of kernel sections."""
    rng = np.random.default_rng(seed)
    grid = Grid.uniform(m)
    data = random_observations(rng, n + 1, p, grid)
    train, x = data[:n], data[n]
    betas = np.stack([c.values for c in random_curves(rng, n, grid)])
    y = random_curves(rng, 1, grid)[0].values
    params = ScalarKernelParams("gaussian", 0.7)
    D = dense_T_matrix(grid)
    w = grid.weights
    g = np.array([_kernel(x, xj, params) for xj in train])
    # <K(x,.)y, sum_j K(.,x_j) beta_j>_F = sum_j G(x,x_j) <T y, beta_j>
    lhs = float(np.sum(g * ((betas * w) @ (D @ y))))
    # <f(x), y> with f(x) = sum_j G(x,x_j) T beta_j
    fx = g @ (betas @ D.T)
    rhs = float(np.dot(w, fx * y))
    scale = max(abs(lhs), abs(rhs), 1e-300)
    measured = abs(lhs - rhs) / scale
    return {
        "name": "reproducing-property",
        "measured": measured,
        "bound": 1e-6,
        "passed": measured <= 1e-6,
    }


def _kernel(a, b, params):
    from .scalar_kernel import eval_scalar_kernel

    return eval_scalar_kernel(a, b, params)


def run_all(seed=0, n=3, m=31, k=20):
    checks = [
        check_solver_oracle(seed=seed, n=n, m=m, k=k),
        check_root_residuals(),
        check_spectral_consistency(),
        check_gram_psd(seed=seed),
        check_block_gram_psd(seed=seed),
        check_reproducing_property(seed=seed),
    ]
    return checks
