"""Classical scalar RLSC on concatenated feature vectors (the comparison method)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import _backend
from .data import Dataset
from .errors import NumericError, StructuralError

__all__ = [
    "VectorizedDataset",
    "BaselineModel",
    "vectorize",
    "train_rlsc",
    "classify_rlsc",
    "evaluate_rlsc",
    "median_sigma_euclidean",
]


@dataclass
class VectorizedDataset:
    """Observations flattened to rows of length p*m, channel-major order."""

    rows: np.ndarray                # (n, p*m)
    labels: np.ndarray
    class_names: list
    p: int
    m: int

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def n_classes(self) -> int:
        return len(self.class_names)


def vectorize(data: Dataset) -> VectorizedDataset:
    """row_i = concat(channel_0 values, ..., channel_{p-1} values)."""
    rows = np.stack([obs.as_array().reshape(-1) for obs in data.observations])
    return VectorizedDataset(
        rows=rows,
        labels=data.labels.copy(),
        class_names=list(data.class_names),
        p=data.p,
        m=data.grid.m,
    )


def devectorize_rows(vd: VectorizedDataset) -> np.ndarray:
    """(n, p, m) view of the rows; inverse of the concatenation."""
    return vd.rows.reshape(vd.n, vd.p, vd.m)


def _rbf(d2: np.ndarray, sigma: float) -> np.ndarray:
    return np.exp(-d2 / (2.0 * sigma**2))


def median_sigma_euclidean(rows: np.ndarray, fallback: float = 1.0) -> float:
    """Median pairwise Euclidean distance between concatenated rows."""
    X = rows[:, None, :]
    d2 = _backend.pairwise_sqdist(X, np.ones(rows.shape[1]))
    off = d2[np.triu_indices(rows.shape[0], k=1)]
    if off.size == 0:
        return fallback
    med = float(np.sqrt(np.median(off)))
    return med if med > 0 else fallback


@dataclass
class BaselineModel:
    """One-vs-all scalar RLSC with a Gaussian kernel on R^{p*m}."""

    train_rows: np.ndarray          # (n, p*m)
    coef: np.ndarray                # (n, N) one column of dual coefficients per class
    sigma: float
    lam: float
    class_names: list
    p: int
    m: int


def _gram(rows_a: np.ndarray, rows_b: np.ndarray, sigma: float) -> np.ndarray:
    w = np.ones(rows_a.shape[1])
    if rows_a is rows_b:
        d2 = _backend.pairwise_sqdist(rows_a[:, None, :], w)
    else:
        d2 = _backend.cross_sqdist(rows_a[:, None, :], rows_b[:, None, :], w)
    return _rbf(d2, sigma)


def train_rlsc(vd: VectorizedDataset, sigma: float, lam: float) -> BaselineModel:
    """Solve (K + lam*I) c = y for every one-vs-all +-1 label column at once."""
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    K = _gram(vd.rows, vd.rows, sigma)
    Y = np.where(vd.labels[:, None] == np.arange(vd.n_classes)[None, :], 1.0, -1.0)
    A = K + lam * np.eye(vd.n)
    try:
        cho = scipy.linalg.cho_factor(A)
        coef = scipy.linalg.cho_solve(cho, Y)
    except scipy.linalg.LinAlgError as exc:
        raise NumericError(f"RLSC solve failed: {exc}") from exc
    resid = np.linalg.norm(A @ coef - Y)
    if resid > 1e-8 * max(np.linalg.norm(Y), 1.0):
        raise NumericError(f"RLSC solve residual {resid:.3g} exceeds bound")
    return BaselineModel(
        train_rows=vd.rows.copy(),
        coef=coef,
        sigma=sigma,
        lam=lam,
        class_names=list(vd.class_names),
        p=vd.p,
        m=vd.m,
    )


def score_matrix_rlsc(model: BaselineModel, rows: np.ndarray) -> np.ndarray:
    """(q, N) scores f_c(x) = sum_j coef[j, c] K(x, x_j)."""
    if rows.shape[1] != model.train_rows.shape[1]:
        raise StructuralError("feature dimension does not match the model")
    K = _gram(rows, model.train_rows, model.sigma)
    return K @ model.coef


def classify_rlsc(model: BaselineModel, row: np.ndarray) -> tuple[int, np.ndarray]:
    scores = score_matrix_rlsc(model, np.atleast_2d(row))[0]
    return int(np.argmax(scores)), scores


def evaluate_rlsc(model: BaselineModel, test: Dataset):
    """Confusion matrix on a Dataset, shared layout with the functional side."""
    from .classifier import ConfusionMatrix

    if test.n == 0:
        raise ValueError("test set is empty")
    vd = vectorize(test)
    scores = score_matrix_rlsc(model, vd.rows)
    predicted = np.argmax(scores, axis=1)
    counts = np.zeros((model.coef.shape[1],) * 2, dtype=int)
    np.add.at(counts, (predicted, vd.labels), 1)
    return ConfusionMatrix(counts, list(model.class_names))
