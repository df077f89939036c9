"""One-vs-all multiclass classification with function-valued labels."""

from __future__ import annotations

import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .errors import StructuralError
from .function_space import Grid, SampledFunction
from .integral_operator import identity_eigensystem, operator_eigensystem
from .scalar_kernel import ScalarKernelParams, gram_matrix
from .solver import (
    KroneckerEigen,
    RegularizationConfig,
    TrainedModel,
    build_kronecker_eigen,
    discarded_energy_ratio,
    predict_values,
    train_functional,
)

LABEL_KINDS = ("heaviside", "constant")


@dataclass(frozen=True)
class LabelScheme:
    kind: str = "heaviside"
    scale: float = 1.0
    step_at: float = 0.5

    def __post_init__(self):
        if self.kind not in LABEL_KINDS:
            raise ValueError(f"unknown label kind {self.kind!r}")
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale}")
        if self.kind == "heaviside" and not 0.0 < self.step_at < 1.0:
            raise ValueError(f"step_at must be in (0,1), got {self.step_at}")


def make_label(positive: bool, scheme: LabelScheme, grid: Grid) -> SampledFunction:
    """The function-valued binary label: +scale pattern, negated for negatives."""
    if scheme.kind == "constant":
        vals = np.full(grid.m, scheme.scale)
    else:
        vals = scheme.scale * (grid.points >= scheme.step_at).astype(float)
    if not positive:
        vals = -vals
    return SampledFunction(grid, vals)


@dataclass
class ConfusionMatrix:
    """Counts with rows = predicted class, columns = true class."""

    counts: np.ndarray
    class_names: list

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def accuracy(self) -> float:
        return float(np.trace(self.counts)) / self.total

    def column_totals(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("predicted\\true," + ",".join(self.class_names) + "\n")
        for i, name in enumerate(self.class_names):
            buf.write(name + "," + ",".join(str(c) for c in self.counts[i]) + "\n")
        return buf.getvalue()

    def to_text(self) -> str:
        """Aligned table of per-column percentages, true classes as columns."""
        names = self.class_names
        width = max(6, max(len(n) for n in names) + 1)
        col_tot = np.maximum(self.column_totals(), 1)
        pct = 100.0 * self.counts / col_tot
        lines = ["".ljust(width) + "".join(n.rjust(width) for n in names)]
        for i, name in enumerate(names):
            lines.append(
                name.ljust(width)
                + "".join(f"{pct[i, j]:.1f}".rjust(width) for j in range(len(names)))
            )
        lines.append(f"Total Recognition Rate = {100.0 * self.accuracy:.2f}%")
        return "\n".join(lines)


@dataclass
class MulticlassModel:
    """N one-vs-all binary models sharing grid, kernel params, lambda, and k."""

    class_names: list
    per_class: list                 # N TrainedModels
    scheme: LabelScheme

    def __post_init__(self):
        if len(self.per_class) < 2:
            raise ValueError("need at least two classes")

    @property
    def grid(self) -> Grid:
        return self.per_class[0].grid

    @property
    def n_classes(self) -> int:
        return len(self.per_class)


def _label_matrix(data: Dataset, cls: int, scheme: LabelScheme) -> np.ndarray:
    pos = make_label(True, scheme, data.grid).values
    signs = np.where(data.labels == cls, 1.0, -1.0)
    return signs[:, None] * pos[None, :]


def train_multiclass(
    data: Dataset,
    config: RegularizationConfig,
    params: ScalarKernelParams,
    scheme: LabelScheme,
    operator: str = "exponential-integral",
    ke: KroneckerEigen | None = None,
    workers: int = 1,
) -> MulticlassModel:
    """Train N one-vs-all models; Gram and T eigendecompositions are shared."""
    if data.n_classes < 2:
        raise ValueError("multiclass training needs at least 2 classes")
    if np.any(data.class_counts() < 1):
        raise ValueError("every class needs at least one training example")
    if ke is None:
        if operator == "identity":
            op = identity_eigensystem(data.grid)
        else:
            op = operator_eigensystem(config.k, data.grid)
        ke = build_kronecker_eigen(gram_matrix(data.observations, params), op)

    def fit(cls):
        return train_functional(
            data.observations,
            _label_matrix(data, cls, scheme),
            config,
            params,
            ke.op,
            ke=ke,
        )

    classes = range(data.n_classes)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            models = list(pool.map(fit, classes))
    else:
        models = [fit(c) for c in classes]
    return MulticlassModel(list(data.class_names), models, scheme)


DECISION_RULES = ("projection", "distance")


def score_matrix(model: MulticlassModel, observations, rule: str = "projection") -> np.ndarray:
    """(n_obs, N) score matrix; higher is better for every rule.

    "projection": <f_c(x), y+> / ||y+||^2, the default; reduces to the usual
    real-valued score when the label is a constant function.
    "distance": -||f_c(x) - y+||^2, raw L2 proximity to the positive label.
    """
    if rule not in DECISION_RULES:
        raise ValueError(f"unknown decision rule {rule!r}")
    grid = model.grid
    pos = make_label(True, model.scheme, grid).values
    norm_sq = float(np.dot(grid.weights, pos * pos))
    cols = []
    for m in model.per_class:
        F = predict_values(m, observations)
        if rule == "projection":
            cols.append((F @ (grid.weights * pos)) / norm_sq)
        else:
            diff = F - pos
            cols.append(-((diff * diff) @ grid.weights))
    return np.stack(cols, axis=1)


def classify(model: MulticlassModel, x, rule: str = "projection") -> tuple[int, np.ndarray]:
    """Predicted class id (argmax score, lowest index on ties) and all scores."""
    scores = score_matrix(model, [x], rule)[0]
    return int(np.argmax(scores)), scores


def evaluate(model: MulticlassModel, test: Dataset, rule: str = "projection") -> ConfusionMatrix:
    if test.n == 0:
        raise ValueError("test set is empty")
    if list(test.class_names) != list(model.class_names):
        raise StructuralError("test set classes do not match the model")
    scores = score_matrix(model, test.observations, rule)
    predicted = np.argmax(scores, axis=1)
    counts = np.zeros((model.n_classes, model.n_classes), dtype=int)
    np.add.at(counts, (predicted, test.labels), 1)
    return ConfusionMatrix(counts, list(model.class_names))


def training_diagnostics(data: Dataset, model: MulticlassModel) -> dict:
    """Spectral diagnostics for the training report."""
    from .scalar_kernel import sym_eigen

    m0 = model.per_class[0]
    op = m0.op_eigen
    Y = _label_matrix(data, 0, model.scheme)
    alpha = sym_eigen(gram_matrix(data.observations, m0.params)).alpha
    diag = {
        "n": m0.n,
        "k": op.k,
        "lambda": m0.lam,
        "sigma": m0.params.sigma,
        "kernel": m0.params.kind,
        "operator": op.kind,
        "alpha_range": [float(alpha.min()), float(alpha.max())],
        "delta": op.delta.tolist(),
        "discarded_energy_ratio": discarded_energy_ratio(Y, op),
    }
    if op.kind == "exponential-integral":
        diag["spectral_tail_bound"] = float(
            (2.0 / (1.0 + ((op.k * np.pi) ** 2))) / m0.lam
        )
    return diag
