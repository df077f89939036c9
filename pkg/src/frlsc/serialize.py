"""Model persistence: a self-describing JSON document, format "frlsc-model/1"."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .classifier import LabelScheme, MulticlassModel
from .errors import DataError
from .function_space import FunctionalObservation, Grid, SampledFunction
from .integral_operator import identity_eigensystem, operator_eigensystem
from .scalar_kernel import ScalarKernelParams
from .solver import TrainedModel

MODEL_FORMAT_TAG = "frlsc-model/1"


def save_model(model: MulticlassModel, path):
    m0 = model.per_class[0]
    doc = {
        "format": MODEL_FORMAT_TAG,
        "m": m0.grid.m,
        "kernel": {"kind": m0.params.kind, "sigma": m0.params.sigma},
        "lambda": m0.lam,
        "k": m0.op_eigen.k,
        "operator": m0.op_eigen.kind,
        "mu": m0.op_eigen.mu.tolist(),
        "delta": m0.op_eigen.delta.tolist(),
        "label_scheme": {
            "kind": model.scheme.kind,
            "scale": model.scheme.scale,
            "step_at": model.scheme.step_at,
        },
        "class_names": list(model.class_names),
        "train_inputs": [
            obs.as_array().tolist() for obs in m0.train_inputs
        ],
        "beta": [
            [b.values.tolist() for b in mc.beta] for mc in model.per_class
        ],
    }
    Path(path).write_text(json.dumps(doc))


def load_model(path) -> MulticlassModel:
    path = Path(path)
    if not path.exists():
        raise DataError(f"{path}: file not found")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != MODEL_FORMAT_TAG:
        raise DataError(f"{path}: missing or unknown format tag (want {MODEL_FORMAT_TAG})")
    try:
        grid = Grid.uniform(int(doc["m"]))
        params = ScalarKernelParams(doc["kernel"]["kind"], doc["kernel"]["sigma"])
        scheme = LabelScheme(**doc["label_scheme"])
        lam = float(doc["lambda"])
        if doc["operator"] == "identity":
            op = identity_eigensystem(grid)
        else:
            op = operator_eigensystem(int(doc["k"]), grid)
        train_inputs = [
            FunctionalObservation.from_array(grid, np.asarray(arr))
            for arr in doc["train_inputs"]
        ]
        per_class = [
            TrainedModel(
                train_inputs=train_inputs,
                beta=[SampledFunction(grid, np.asarray(row)) for row in rows],
                lam=lam,
                params=params,
                op_eigen=op,
                grid=grid,
            )
            for rows in doc["beta"]
        ]
        return MulticlassModel(list(doc["class_names"]), per_class, scheme)
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"{path}: malformed model document: {exc}") from exc
