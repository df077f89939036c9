"""Dataset ingestion, synthetic generation, and train/test splitting.

File schemas (versioned "frlsc-data/1"):

CSV: a comment line "# frlsc-data/1", a header "id,class,channel,v0,...,v{m-1}",
then one row per (observation, channel). Rows whose sample count differs from
the modal m are linearly resampled at load time.

JSON: {"format": "frlsc-data/1", "m": ..., "observations":
[{"id": ..., "class": ..., "channels": [[...], ...]}, ...]}.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError, StructuralError
from .function_space import FunctionalObservation, Grid

FORMAT_TAG = "frlsc-data/1"
CSV_PRECISION = 17


@dataclass
class Dataset:
    """Labeled collection of functional observations on one shared grid."""

    grid: Grid
    observations: list
    labels: np.ndarray              # (n,) integer class ids
    class_names: list = field(default_factory=list)

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=int)
        if len(self.observations) != self.labels.size:
            raise StructuralError("label count does not match observations")
        if self.observations:
            p = self.observations[0].p
            for i, obs in enumerate(self.observations):
                if obs.grid != self.grid or obs.p != p:
                    raise StructuralError(f"observation {i} has mismatched grid or p")
        if not self.class_names:
            self.class_names = [str(c) for c in sorted(set(self.labels.tolist()))]

    @property
    def n(self) -> int:
        return len(self.observations)

    @property
    def p(self) -> int:
        return self.observations[0].p

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.n_classes)


def _resample(values: np.ndarray, m: int) -> np.ndarray:
    old = np.linspace(0.0, 1.0, values.size)
    return np.interp(np.linspace(0.0, 1.0, m), old, values)


def _build_dataset(rows, path):
    """rows: list of (obs_id, class_name, channel_index, values)."""
    if not rows:
        raise DataError(f"{path}: no data rows")
    counts = {}
    for _, _, _, vals in rows:
        counts[len(vals)] = counts.get(len(vals), 0) + 1
    modal_m = max(sorted(counts), key=lambda m: counts[m])
    resampled = 0
    by_obs: dict = {}
    classes: dict = {}
    order = []
    for obs_id, cname, chan, vals in rows:
        if len(vals) != modal_m:
            vals = _resample(np.asarray(vals), modal_m)
            resampled += 1
        if obs_id not in by_obs:
            by_obs[obs_id] = {}
            order.append(obs_id)
            classes[obs_id] = cname
        elif classes[obs_id] != cname:
            raise DataError(f"{path}: observation {obs_id!r} has conflicting classes")
        if chan in by_obs[obs_id]:
            raise DataError(f"{path}: duplicate channel {chan} for {obs_id!r}")
        by_obs[obs_id][chan] = np.asarray(vals, dtype=float)

    p = len(by_obs[order[0]])
    for obs_id in order:
        chans = by_obs[obs_id]
        if len(chans) != p or sorted(chans) != list(range(p)):
            raise DataError(
                f"{path}: observation {obs_id!r} has channels {sorted(chans)}, "
                f"expected 0..{p - 1}"
            )
    grid = Grid.uniform(modal_m)
    class_names = sorted(set(classes.values()))
    name_to_id = {name: i for i, name in enumerate(class_names)}
    observations = [
        FunctionalObservation.from_array(
            grid, np.stack([by_obs[o][c] for c in range(p)])
        )
        for o in order
    ]
    labels = np.array([name_to_id[classes[o]] for o in order])
    ds = Dataset(grid, observations, labels, class_names)
    return ds, resampled


def load_dataset(path, fmt: str | None = None):
    """Load a dataset; returns (Dataset, resample_warning_count)."""
    path = Path(path)
    if fmt is None:
        fmt = "json" if path.suffix.lower() == ".json" else "csv"
    if not path.exists():
        raise DataError(f"{path}: file not found")
    if fmt == "csv":
        return _load_csv(path)
    if fmt == "json":
        return _load_json(path)
    raise DataError(f"unknown dataset format {fmt!r}")


def _load_csv(path):
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        lineno = 0
        header = None
        for rec in reader:
            lineno += 1
            if not rec or rec[0].startswith("#"):
                continue
            if header is None:
                header = rec
                if header[:3] != ["id", "class", "channel"]:
                    raise DataError(
                        f"{path}:{lineno}: expected header id,class,channel,v0,..."
                    )
                continue
            try:
                obs_id, cname, chan = rec[0], rec[1], int(rec[2])
                vals = [float(v) for v in rec[3:]]
            except (ValueError, IndexError) as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from exc
            if not vals:
                raise DataError(f"{path}:{lineno}: row has no sample values")
            rows.append((obs_id, cname, chan, vals))
    if header is None:
        raise DataError(f"{path}: empty file")
    return _build_dataset(rows, path)


def _load_json(path):
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_TAG:
        raise DataError(f"{path}: missing or unknown format tag (want {FORMAT_TAG})")
    rows = []
    for i, obs in enumerate(doc.get("observations", [])):
        for chan, vals in enumerate(obs["channels"]):
            rows.append((str(obs.get("id", i)), str(obs["class"]), chan, vals))
    return _build_dataset(rows, path)


def save_csv(data: Dataset, path):
    with open(path, "w", newline="") as fh:
        fh.write(f"# {FORMAT_TAG}\n")
        writer = csv.writer(fh)
        writer.writerow(
            ["id", "class", "channel"] + [f"v{i}" for i in range(data.grid.m)]
        )
        for i, obs in enumerate(data.observations):
            cname = data.class_names[data.labels[i]]
            for c, chan in enumerate(obs.channels):
                writer.writerow(
                    [i, cname, c] + [f"{v:.{CSV_PRECISION}g}" for v in chan.values]
                )


def save_json(data: Dataset, path):
    doc = {
        "format": FORMAT_TAG,
        "m": data.grid.m,
        "observations": [
            {
                "id": i,
                "class": data.class_names[data.labels[i]],
                "channels": [chan.values.tolist() for chan in obs.channels],
            }
            for i, obs in enumerate(data.observations)
        ],
    }
    Path(path).write_text(json.dumps(doc))


def _random_periodic_curve(rng, n_harmonics=6, decay=1.0):
    """Coefficients for a random 1-periodic curve sum_f a_f sin(2 pi f t + phi_f)."""
    f = np.arange(1, n_harmonics + 1)
    amps = rng.standard_normal(n_harmonics) / f**decay
    phases = rng.uniform(0.0, 2.0 * np.pi, n_harmonics)
    return f, amps, phases


def _eval_periodic(coeffs, t):
    f, amps, phases = coeffs
    return np.sum(
        amps[:, None] * np.sin(2.0 * np.pi * f[:, None] * t[None, :] + phases[:, None]),
        axis=0,
    )


def default_class_lags(n_classes: int, p: int, fine_lag: float = 0.03) -> np.ndarray:
    """Per-(class, channel) phase lags with a two-scale layout.

    Classes pair up into super-groups half a period apart; within a group the
    two classes differ only by a small channel-dependent lag, so the class
    signal lives at two distinct scales of the between-observation distances.
    """
    lags = np.zeros((n_classes, p))
    n_groups = (n_classes + 1) // 2
    for c in range(n_classes):
        group, member = divmod(c, 2)
        base = group / n_groups
        for j in range(p):
            lags[c, j] = base + member * fine_lag * (j + 1)
    return lags


def synth_lag_dataset(
    n_per_class: int,
    n_classes: int,
    p: int,
    m: int,
    noise_sd: float,
    seed: int,
    fine_lag: float = 0.03,
    template_strength: float = 1.0,
    individual_sd: float = 1.0,
    class_lags: np.ndarray | None = None,
) -> Dataset:
    """Synthetic curves whose classes differ only through temporal phase lags.

    Each observation's channels are phase-lagged reads of one shared random
    periodic template plus individual smooth variation and white noise. The
    template is 1-periodic and lags act as circular shifts, so the pointwise
    value distribution of every channel is identical across classes: any
    summary that ignores time ordering carries no class information.
    """
    if min(n_per_class, n_classes, p, m) < 1:
        raise ValueError("all counts must be positive")
    rng = np.random.default_rng(seed)
    grid = Grid.uniform(m)
    t = grid.points
    if class_lags is None:
        class_lags = default_class_lags(n_classes, p, fine_lag)
    template = _random_periodic_curve(rng, n_harmonics=8)
    observations, labels = [], []
    for c in range(n_classes):
        for _ in range(n_per_class):
            chans = np.empty((p, m))
            for j in range(p):
                indiv = _random_periodic_curve(rng, n_harmonics=8)
                chans[j] = (
                    template_strength
                    * _eval_periodic(template, (t + class_lags[c, j]) % 1.0)
                    + individual_sd * _eval_periodic(indiv, t)
                    + noise_sd * rng.standard_normal(m)
                )
            observations.append(FunctionalObservation.from_array(grid, chans))
            labels.append(c)
    return Dataset(grid, observations, np.array(labels), [f"C{c + 1}" for c in range(n_classes)])


def synth_null_dataset(
    n_per_class: int, n_classes: int, p: int, m: int, noise_sd: float, seed: int
) -> Dataset:
    """Control dataset: identical generating process for every class.

    Labels are assigned round-robin to observations drawn i.i.d. from one
    process, so no method can beat chance except by sampling luck.
    """
    ds = synth_lag_dataset(
        n_per_class,
        n_classes,
        p,
        m,
        noise_sd,
        seed,
        class_lags=np.zeros((n_classes, p)),
    )
    return ds


def permute_time(data: Dataset, perm: np.ndarray) -> Dataset:
    """Apply one fixed permutation of grid indices to every curve (test helper)."""
    perm = np.asarray(perm)
    obs = [
        FunctionalObservation.from_array(data.grid, o.as_array()[:, perm])
        for o in data.observations
    ]
    return Dataset(data.grid, obs, data.labels.copy(), list(data.class_names))


def split(data: Dataset, train_fraction: float, seed: int):
    """Stratified, deterministic train/test split; disjoint and exhaustive."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0,1), got {train_fraction}")
    rng = np.random.default_rng(seed)
    train_idx, test_idx = [], []
    for c in range(data.n_classes):
        idx = np.flatnonzero(data.labels == c)
        if idx.size < 2:
            raise ValueError(f"class {data.class_names[c]!r} has fewer than 2 items")
        idx = rng.permutation(idx)
        n_train = int(round(train_fraction * idx.size))
        n_train = min(max(n_train, 1), idx.size - 1)
        train_idx.extend(idx[:n_train])
        test_idx.extend(idx[n_train:])
    train_idx.sort()
    test_idx.sort()

    def subset(indices):
        return Dataset(
            data.grid,
            [data.observations[i] for i in indices],
            data.labels[indices],
            list(data.class_names),
        )

    return subset(np.array(train_idx)), subset(np.array(test_idx))
