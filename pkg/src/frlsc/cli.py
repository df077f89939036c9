"""Command-line front end.

Verbs: train, predict, evaluate, benchmark, verify, synth. Options come from
an optional flat key=value config file plus flags; flags win. Every command
writes a human-readable .txt report and a machine-readable .json report into
the output directory and is deterministic given (config, seed).

Exit codes: 0 ok, 1 verification failure, 2 config error, 3 data error,
4 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import baseline as bl
from . import verify as verify_mod
from ._backend import BACKEND
from .classifier import (
    LabelScheme,
    evaluate,
    score_matrix,
    train_multiclass,
    training_diagnostics,
)
from .data import (
    load_dataset,
    save_csv,
    save_json,
    split,
    synth_lag_dataset,
    synth_null_dataset,
)
from .errors import DataError, NumericError, StructuralError
from .scalar_kernel import ScalarKernelParams, median_sigma
from .serialize import load_model, save_model
from .solver import RegularizationConfig
from .tuning import tune_baseline, tune_functional

EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


class ConfigError(ValueError):
    pass


def read_config_file(path) -> dict:
    """Flat key = value file; '#' starts a comment."""
    cfg = {}
    text = Path(path).read_text()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, val = (part.strip() for part in line.split("=", 1))
        cfg[key.replace("-", "_")] = val
    return cfg


def _merge(args: argparse.Namespace, defaults: dict) -> dict:
    """Flags win over config-file values, which win over defaults."""
    cfg = dict(defaults)
    if getattr(args, "config", None):
        file_cfg = read_config_file(args.config)
        bad = sorted(set(file_cfg) - set(defaults))
        if bad:
            raise ConfigError(f"unknown config keys: {', '.join(bad)}")
        for key, raw in file_cfg.items():
            default = defaults[key]
            if isinstance(default, bool):
                cfg[key] = raw.lower() in ("1", "true", "yes")
            elif isinstance(default, int):
                cfg[key] = int(raw)
            elif isinstance(default, float):
                cfg[key] = float(raw)
            else:
                cfg[key] = raw
    for key in defaults:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    return cfg


def _validate(cfg: dict, rules: dict):
    problems = []
    for key, ok in rules.items():
        try:
            if not ok(cfg[key]):
                problems.append(key)
        except (TypeError, ValueError):
            problems.append(key)
    if problems:
        raise ConfigError(
            "invalid config values: " + ", ".join(f"{k}={cfg[k]!r}" for k in problems)
        )


def _write_reports(outdir, name, text: str, payload: dict):
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / f"{name}.txt").write_text(text + "\n")
    (outdir / f"{name}.json").write_text(json.dumps(payload, indent=2) + "\n")


def _load(path):
    ds, warnings = load_dataset(path)
    if warnings:
        print(f"warning: {warnings} rows resampled to the modal grid", file=sys.stderr)
    return ds


def _scheme(cfg) -> LabelScheme:
    return LabelScheme(cfg["label_kind"], cfg["label_scale"], cfg["step_at"])


TRAIN_DEFAULTS = {
    "data": "",
    "sigma": 0.0,          # 0 means: median heuristic (or grid search if tune)
    "lambda": 0.0,         # 0 means: validation grid search
    "k": 8,
    "kernel": "gaussian",
    "operator": "exponential-integral",
    "label_kind": "heaviside",
    "label_scale": 1.0,
    "step_at": 0.5,
    "seed": 0,
    "workers": 1,
    "out": ".",
}


def cmd_train(args) -> int:
    cfg = _merge(args, TRAIN_DEFAULTS)
    _validate(
        cfg,
        {
            "data": lambda v: bool(v),
            "k": lambda v: v >= 1,
            "sigma": lambda v: v >= 0,
            "lambda": lambda v: v >= 0,
            "workers": lambda v: v >= 1,
        },
    )
    train = _load(cfg["data"])
    scheme = _scheme(cfg)
    tuned = None
    if cfg["lambda"] > 0 and cfg["sigma"] > 0:
        params = ScalarKernelParams(cfg["kernel"], cfg["sigma"])
        lam = cfg["lambda"]
    else:
        sigma_grid = [cfg["sigma"]] if cfg["sigma"] > 0 else None
        lambda_grid = [cfg["lambda"]] if cfg["lambda"] > 0 else None
        params, lam, tuned = tune_functional(
            train,
            cfg["k"],
            scheme,
            kernel_kind=cfg["kernel"],
            sigma_grid=sigma_grid,
            lambda_grid=lambda_grid,
            seed=cfg["seed"],
            operator=cfg["operator"],
        )
    model = train_multiclass(
        train,
        RegularizationConfig(lam, cfg["k"]),
        params,
        scheme,
        operator=cfg["operator"],
        workers=cfg["workers"],
    )
    outdir = Path(cfg["out"])
    outdir.mkdir(parents=True, exist_ok=True)
    model_path = outdir / "model.json"
    save_model(model, model_path)
    diag = training_diagnostics(train, model)
    train_cm = evaluate(model, train)
    payload = {
        "command": "train",
        "backend": BACKEND,
        "seed": cfg["seed"],
        "model_file": str(model_path),
        "train_accuracy": train_cm.accuracy,
        "diagnostics": diag,
    }
    if tuned is not None:
        payload["tuning"] = {"chosen_sigma": params.sigma, "chosen_lambda": lam,
                             "trials": tuned}
    text = "\n".join(
        [
            f"trained on {train.n} observations, {train.n_classes} classes",
            f"sigma={params.sigma:.6g} lambda={lam:.6g} k={cfg['k']}",
            f"alpha range: [{diag['alpha_range'][0]:.3e}, {diag['alpha_range'][1]:.3e}]",
            "delta: " + " ".join(f"{d:.4g}" for d in diag["delta"][:12]),
            f"discarded label energy ratio: {diag['discarded_energy_ratio']:.3e}",
            f"training accuracy: {100 * train_cm.accuracy:.2f}%",
            f"model written to {model_path}",
        ]
    )
    _write_reports(outdir, "train_report", text, payload)
    print(text)
    return 0


PREDICT_DEFAULTS = {"data": "", "model": "", "out": ".", "seed": 0}


def cmd_predict(args) -> int:
    cfg = _merge(args, PREDICT_DEFAULTS)
    _validate(cfg, {"data": lambda v: bool(v), "model": lambda v: bool(v)})
    model = load_model(cfg["model"])
    ds = _load(cfg["data"])
    scores = score_matrix(model, ds.observations)
    predicted = np.argmax(scores, axis=1)
    rows = [
        {
            "index": i,
            "predicted": model.class_names[predicted[i]],
            "scores": scores[i].tolist(),
        }
        for i in range(ds.n)
    ]
    payload = {"command": "predict", "backend": BACKEND, "seed": cfg["seed"],
               "class_names": model.class_names, "predictions": rows}
    text = "\n".join(f"{r['index']}\t{r['predicted']}" for r in rows)
    _write_reports(cfg["out"], "predictions", text, payload)
    print(text)
    return 0


EVALUATE_DEFAULTS = {"data": "", "model": "", "out": ".", "seed": 0}


def cmd_evaluate(args) -> int:
    cfg = _merge(args, EVALUATE_DEFAULTS)
    _validate(cfg, {"data": lambda v: bool(v), "model": lambda v: bool(v)})
    model = load_model(cfg["model"])
    ds = _load(cfg["data"])
    cm = evaluate(model, ds)
    payload = {
        "command": "evaluate",
        "backend": BACKEND,
        "seed": cfg["seed"],
        "accuracy": cm.accuracy,
        "counts": cm.counts.tolist(),
        "class_names": cm.class_names,
    }
    outdir = Path(cfg["out"])
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "confusion.csv").write_text(cm.to_csv())
    _write_reports(outdir, "evaluate_report", cm.to_text(), payload)
    print(cm.to_text())
    return 0


BENCHMARK_DEFAULTS = {
    "data": "",            # empty: generate the synthetic lag dataset
    "n_per_class": 60,
    "classes": 4,
    "p": 3,
    "m": 64,
    "noise_sd": 3.0,
    "null": False,
    "train_fraction": 2.0 / 3.0,
    "k": 8,
    "label_kind": "heaviside",
    "label_scale": 1.0,
    "step_at": 0.5,
    "seed": 0,
    "workers": 1,
    "out": ".",
}


def run_benchmark(cfg: dict) -> dict:
    """Train both methods on one identical split; returns the comparison."""
    if cfg["data"]:
        full = _load(cfg["data"])
    else:
        gen = synth_null_dataset if cfg.get("null") else synth_lag_dataset
        full = gen(
            cfg["n_per_class"], cfg["classes"], cfg["p"], cfg["m"],
            cfg["noise_sd"], cfg["seed"],
        )
    if full.n_classes < 2:
        raise DataError("benchmark needs a dataset with at least 2 classes")
    train, test = split(full, cfg["train_fraction"], cfg["seed"])
    scheme = _scheme(cfg)

    params, lam_f, _ = tune_functional(train, cfg["k"], scheme, seed=cfg["seed"])
    fmodel = train_multiclass(
        train, RegularizationConfig(lam_f, cfg["k"]), params, scheme,
        workers=cfg["workers"],
    )
    f_cm = evaluate(fmodel, test)

    sigma_b, lam_b, _ = tune_baseline(train, seed=cfg["seed"])
    bmodel = bl.train_rlsc(bl.vectorize(train), sigma_b, lam_b)
    b_cm = bl.evaluate_rlsc(bmodel, test)

    return {
        "functional": {"sigma": params.sigma, "lambda": lam_f,
                       "accuracy": f_cm.accuracy, "cm": f_cm},
        "baseline": {"sigma": sigma_b, "lambda": lam_b,
                     "accuracy": b_cm.accuracy, "cm": b_cm},
        "delta_points": 100.0 * (f_cm.accuracy - b_cm.accuracy),
    }


def cmd_benchmark(args) -> int:
    cfg = _merge(args, BENCHMARK_DEFAULTS)
    _validate(
        cfg,
        {
            "classes": lambda v: v >= 2,
            "n_per_class": lambda v: v >= 2,
            "p": lambda v: v >= 1,
            "m": lambda v: v >= 2,
            "train_fraction": lambda v: 0 < v < 1,
        },
    )
    res = run_benchmark(cfg)
    f, b = res["functional"], res["baseline"]
    text = "\n".join(
        [
            "== functional RLSC ==",
            f["cm"].to_text(),
            "",
            "== baseline RLSC ==",
            b["cm"].to_text(),
            "",
            f"functional accuracy: {100 * f['accuracy']:.2f}%  "
            f"(sigma={f['sigma']:.4g}, lambda={f['lambda']:.4g})",
            f"baseline accuracy:   {100 * b['accuracy']:.2f}%  "
            f"(sigma={b['sigma']:.4g}, lambda={b['lambda']:.4g})",
            f"accuracy delta: {res['delta_points']:+.2f} points",
        ]
    )
    payload = {
        "command": "benchmark",
        "backend": BACKEND,
        "seed": cfg["seed"],
        "functional": {k: v for k, v in f.items() if k != "cm"},
        "baseline": {k: v for k, v in b.items() if k != "cm"},
        "functional_counts": f["cm"].counts.tolist(),
        "baseline_counts": b["cm"].counts.tolist(),
        "delta_points": res["delta_points"],
    }
    outdir = Path(cfg["out"])
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "functional_confusion.csv").write_text(f["cm"].to_csv())
    (outdir / "baseline_confusion.csv").write_text(b["cm"].to_csv())
    _write_reports(outdir, "benchmark_report", text, payload)
    print(text)
    return 0


VERIFY_DEFAULTS = {"n": 3, "m": 31, "k": 20, "seed": 0, "model": "", "out": "."}


def cmd_verify(args) -> int:
    cfg = _merge(args, VERIFY_DEFAULTS)
    _validate(cfg, {"n": lambda v: v >= 1, "m": lambda v: v >= 2,
                    "k": lambda v: v >= 1})
    if cfg["model"]:
        load_model(cfg["model"])  # raises DataError on a corrupted file
    checks = verify_mod.run_all(seed=cfg["seed"], n=cfg["n"], m=cfg["m"], k=cfg["k"])
    lines = []
    for c in checks:
        status = "PASS" if c["passed"] else "FAIL"
        lines.append(
            f"{status}  {c['name']}: measured {c['measured']:.3e} "
            f"vs bound {c['bound']:.3e}"
        )
    text = "\n".join(lines)
    payload = {"command": "verify", "backend": BACKEND, "seed": cfg["seed"],
               "checks": checks}
    _write_reports(cfg["out"], "verify_report", text, payload)
    print(text)
    return 0 if all(c["passed"] for c in checks) else EXIT_VERIFY_FAILED


SYNTH_DEFAULTS = {
    "out": "synth.csv",
    "n_per_class": 60,
    "classes": 4,
    "p": 3,
    "m": 64,
    "noise_sd": 3.0,
    "seed": 0,
    "null": False,
}


def cmd_synth(args) -> int:
    cfg = _merge(args, SYNTH_DEFAULTS)
    _validate(
        cfg,
        {
            "classes": lambda v: v >= 1,
            "n_per_class": lambda v: v >= 1,
            "p": lambda v: v >= 1,
            "m": lambda v: v >= 2,
            "noise_sd": lambda v: v >= 0,
        },
    )
    gen = synth_null_dataset if cfg["null"] else synth_lag_dataset
    ds = gen(cfg["n_per_class"], cfg["classes"], cfg["p"], cfg["m"],
             cfg["noise_sd"], cfg["seed"])
    out = Path(cfg["out"])
    if out.suffix.lower() == ".json":
        save_json(ds, out)
    else:
        save_csv(ds, out)
    print(f"wrote {ds.n} observations ({ds.n_classes} classes) to {out}")
    return 0


def _add_common(sub, defaults):
    sub.add_argument("--config", help="flat key=value config file")
    for key, default in defaults.items():
        flag = "--" + key.replace("_", "-")
        if isinstance(default, bool):
            sub.add_argument(flag, action="store_const", const=True, default=None)
        elif isinstance(default, int):
            sub.add_argument(flag, type=int, default=None)
        elif isinstance(default, float):
            sub.add_argument(flag, type=float, default=None)
        else:
            sub.add_argument(flag, type=str, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frlsc",
        description="Functional RLSC with separable operator-valued kernels",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    for name, defaults, fn in [
        ("train", TRAIN_DEFAULTS, cmd_train),
        ("predict", PREDICT_DEFAULTS, cmd_predict),
        ("evaluate", EVALUATE_DEFAULTS, cmd_evaluate),
        ("benchmark", BENCHMARK_DEFAULTS, cmd_benchmark),
        ("verify", VERIFY_DEFAULTS, cmd_verify),
        ("synth", SYNTH_DEFAULTS, cmd_synth),
    ]:
        sub = subs.add_parser(name)
        _add_common(sub, defaults)
        sub.set_defaults(fn=fn)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        if isinstance(exc, (DataError, StructuralError)):
            print(f"data error: {exc}", file=sys.stderr)
            return EXIT_DATA
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
