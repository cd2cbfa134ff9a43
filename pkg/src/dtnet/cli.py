"""Command-line interface: train, eval, and bench subcommands.

A run is described by one JSON config file; command-line flags override
individual entries. Exit status 0 on success, 1 on numeric failure, and 2
on usage or I/O problems.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import data as datamod
from .errors import (
    DataFormatError,
    DegenerateLayerError,
    DimensionError,
    ModelFormatError,
    NumericError,
)
from .model_io import hp_to_json, load_model, save_model
from .network import HyperParams, accuracy, forward_trace, parse_method, predict, train
from .report import training_payload, write_bench_report, write_training_report
from .transforms import (
    apply_fast,
    apply_naive,
    parse_kind,
    plan as make_plan,
    transform_matrix,
)

_DATASET_KEYS = {
    "format", "train", "test", "train_images", "train_labels", "test_images",
    "test_labels", "label_column", "has_header", "delimiter",
    "split_fraction", "split_seed", "classes", "dims", "samples_per_class",
    "spread", "seed",
}
_HP_KEYS = {
    "lambda0", "mu", "alpha", "k_max", "eta_layer", "eta_var", "l_max",
    "gamma", "bag", "method", "part2_activation", "preprocess",
}
_TOP_KEYS = {"dataset", "hyperparams", "seed", "subset", "out"}


def _validate_config(cfg: dict) -> None:
    unknown = set(cfg) - _TOP_KEYS
    if unknown:
        raise DataFormatError(f"unknown config keys: {sorted(unknown)}")
    unknown = set(cfg.get("dataset", {})) - _DATASET_KEYS
    if unknown:
        raise DataFormatError(f"unknown dataset config keys: {sorted(unknown)}")
    unknown = set(cfg.get("hyperparams", {})) - _HP_KEYS
    if unknown:
        raise DataFormatError(f"unknown hyperparameter keys: {sorted(unknown)}")


def _load_config(path) -> dict:
    with open(path) as fh:
        try:
            cfg = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataFormatError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(cfg, dict):
        raise DataFormatError(f"{path}: config must be a JSON object")
    _validate_config(cfg)
    return cfg


def _merge_flags(cfg: dict, args: argparse.Namespace) -> dict:
    ds = dict(cfg.get("dataset", {}))
    hp = dict(cfg.get("hyperparams", {}))
    flag_to_ds = {
        "dataset_format": "format", "train": "train", "test": "test",
        "train_images": "train_images", "train_labels": "train_labels",
        "test_images": "test_images", "test_labels": "test_labels",
        "label_column": "label_column", "delimiter": "delimiter",
        "split_fraction": "split_fraction",
    }
    for flag, key in flag_to_ds.items():
        val = getattr(args, flag, None)
        if val is not None:
            ds[key] = val
    if getattr(args, "has_header", False):
        ds["has_header"] = True
    flag_to_hp = {
        "lambda0": "lambda0", "mu": "mu", "alpha": "alpha", "kmax": "k_max",
        "eta_layer": "eta_layer", "eta_var": "eta_var", "lmax": "l_max",
        "gamma": "gamma", "method": "method", "bag": "bag",
        "part2_activation": "part2_activation", "preprocess": "preprocess",
    }
    for flag, key in flag_to_hp.items():
        val = getattr(args, flag, None)
        if val is not None:
            hp[key] = val
    out = dict(cfg)
    out["dataset"] = ds
    out["hyperparams"] = hp
    for key in ("seed", "subset", "out"):
        val = getattr(args, key, None)
        if val is not None:
            out[key] = val
    _validate_config(out)
    return out


def _build_hp(hp_cfg: dict) -> HyperParams:
    kwargs = dict(hp_cfg)
    if "bag" in kwargs:
        bag = kwargs["bag"]
        if isinstance(bag, str):
            bag = bag.split(",")
        kwargs["bag"] = tuple(parse_kind(k) for k in bag)
    if "method" in kwargs:
        kwargs["method"] = parse_method(str(kwargs["method"]))
    for key in ("lambda0", "mu", "alpha", "eta_layer", "eta_var", "gamma"):
        if key in kwargs:
            kwargs[key] = float(kwargs[key])
    for key in ("k_max", "l_max"):
        if key in kwargs:
            kwargs[key] = int(kwargs[key])
    return HyperParams(**kwargs)


def _load_dataset(ds: dict) -> datamod.Dataset:
    fmt = ds.get("format")
    if fmt is None:
        raise DataFormatError("dataset config needs a 'format'")
    if fmt == "synth":
        return datamod.synth_blobs(
            classes=int(ds.get("classes", 3)), dims=int(ds.get("dims", 8)),
            samples_per_class=int(ds.get("samples_per_class", 100)),
            spread=float(ds.get("spread", 0.3)), seed=int(ds.get("seed", 0)))
    if fmt == "idx":
        for key in ("train_images", "train_labels", "test_images", "test_labels"):
            if key not in ds:
                raise DataFormatError(f"idx dataset config needs '{key}'")
        xtr, ltr = datamod.load_idx(ds["train_images"], ds["train_labels"])
        xte, lte = datamod.load_idx(ds["test_images"], ds["test_labels"])
        return _encode_pair(xtr, ltr, xte, lte)
    if fmt in ("csv", "libsvm"):
        if "train" not in ds:
            raise DataFormatError(f"{fmt} dataset config needs 'train'")
        label_col = ds.get("label_column", -1)
        if isinstance(label_col, str) and label_col.lstrip("-").isdigit():
            label_col = int(label_col)
        if fmt == "csv":
            xtr, ltr = datamod.load_csv(
                ds["train"], label_col,
                bool(ds.get("has_header", False)), ds.get("delimiter", ","))
        else:
            xtr, ltr = datamod.load_libsvm(ds["train"])
        if "test" in ds:
            if fmt == "csv":
                xte, lte = datamod.load_csv(
                    ds["test"], label_col,
                    bool(ds.get("has_header", False)), ds.get("delimiter", ","))
            else:
                xte, lte = datamod.load_libsvm(ds["test"])
            if xte.shape[0] < xtr.shape[0]:  # sparse tail features absent in test
                pad = np.zeros((xtr.shape[0] - xte.shape[0], xte.shape[1]))
                xte = np.concatenate([xte, pad], axis=0)
            elif xte.shape[0] > xtr.shape[0]:
                pad = np.zeros((xte.shape[0] - xtr.shape[0], xtr.shape[1]))
                xtr = np.concatenate([xtr, pad], axis=0)
            return _encode_pair(xtr, ltr, xte, lte)
        labels, names = datamod.encode_labels(ltr)
        T = datamod.one_hot(labels, len(names))
        fraction = float(ds.get("split_fraction", 0.7))
        (xa, ta), (xb, tb) = datamod.split(xtr, T, fraction, int(ds.get("split_seed", 0)))
        return datamod.Dataset(xa, ta, xb, tb, names)
    raise DataFormatError(f"unknown dataset format {fmt!r}")


def _encode_pair(xtr, ltr, xte, lte) -> datamod.Dataset:
    labels_tr, names = datamod.encode_labels(ltr)
    mapping = {name: i for i, name in enumerate(names)}
    try:
        labels_te = np.asarray([mapping[str(v)] for v in lte], dtype=np.int64)
    except KeyError as exc:
        raise DataFormatError(f"test label {exc} never seen in training data") from None
    q = len(names)
    return datamod.Dataset(xtr, datamod.one_hot(labels_tr, q),
                           xte, datamod.one_hot(labels_te, q), names)


def _subset(dataset: datamod.Dataset, size: int, seed: int) -> datamod.Dataset:
    j = dataset.x_train.shape[1]
    if size >= j:
        return dataset
    rng = np.random.default_rng(seed)
    idx = np.sort(rng.choice(j, size=size, replace=False))
    return datamod.Dataset(dataset.x_train[:, idx], dataset.t_train[:, idx],
                           dataset.x_test, dataset.t_test, dataset.class_names)


def cmd_train(args) -> int:
    cfg = _merge_flags(_load_config(args.config) if args.config else {}, args)
    hp = _build_hp(cfg.get("hyperparams", {}))
    dataset = _load_dataset(cfg.get("dataset", {}))
    if cfg.get("subset"):
        dataset = _subset(dataset, int(cfg["subset"]), int(cfg.get("seed", 0)))
    outdir = Path(cfg.get("out", "runs/latest"))
    outdir.mkdir(parents=True, exist_ok=True)

    started = time.perf_counter()
    model = train(dataset.x_train, dataset.t_train, hp)
    elapsed = time.perf_counter() - started
    model.class_names = dataset.class_names
    save_model(outdir / "model.npz", model)

    truth = dataset.labels_test
    test_acc = [accuracy(np.argmax(scores, axis=0), truth)
                for scores in forward_trace(model, dataset.x_test)]
    echo = {"dataset": cfg.get("dataset", {}), "hyperparams": _hp_echo(hp),
            "seed": cfg.get("seed", 0), "subset": cfg.get("subset"),
            "train_seconds": elapsed}
    payload = training_payload(model, echo, test_acc)
    write_training_report(outdir, payload)

    print(f"architecture: {payload['architecture']}")
    print(f"train accuracy: {model.train_accuracy[-1]:.2f}%")
    print(f"test accuracy:  {test_acc[-1]:.2f}%")
    print(f"model and report written to {outdir}")
    return 0


def _hp_echo(hp: HyperParams) -> dict:
    return hp_to_json(hp)


def cmd_eval(args) -> int:
    model = load_model(args.model)
    cfg = _merge_flags(_load_config(args.config) if args.config else {}, args)
    dataset = _load_dataset(cfg.get("dataset", {}))
    X, truth = ((dataset.x_train, dataset.labels_train) if args.on == "train"
                else (dataset.x_test, dataset.labels_test))
    if X.shape[0] != model.p:
        raise DimensionError(
            f"model expects {model.p} features, dataset has {X.shape[0]}")
    pred = predict(model, X)
    acc = accuracy(pred, truth)
    q = model.q
    confusion = np.zeros((q, q), dtype=np.int64)
    np.add.at(confusion, (truth, pred), 1)
    print(f"accuracy: {acc:.2f}%")
    names = model.class_names or [str(i) for i in range(q)]
    print("confusion (rows = truth, columns = prediction):")
    for i, name in enumerate(names):
        print(f"  {name:>12s}: " + " ".join(f"{v:6d}" for v in confusion[i]))
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        with open(outdir / "confusion.csv", "w") as fh:
            fh.write("," + ",".join(names) + "\n")
            for i, name in enumerate(names):
                fh.write(name + "," + ",".join(str(v) for v in confusion[i]) + "\n")
        with open(outdir / "eval.json", "w") as fh:
            json.dump({"accuracy": acc, "on": args.on,
                       "confusion": confusion.tolist()}, fh, indent=2)
            fh.write("\n")
    return 0


_OPS_FAST = {
    "dct2": "n*log2(n)", "dst1": "n*log2(n)", "dht": "n*log2(n)",
    "fwht_natural": "n*log2(n)", "fwht_sequency": "n*log2(n)",
    "random": "n^2",
}


def cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",")]
    if min(sizes) < 4:
        raise DataFormatError("bench sizes must be >= 4")
    kinds = [parse_kind(k) for k in args.kinds.split(",")]
    rng = np.random.default_rng(args.seed or 0)
    rows = []
    for kind in kinds:
        for n in sizes:
            p = make_plan(kind, n)
            x = rng.standard_normal(n)
            fast = apply_fast(p, x)
            naive = apply_naive(p, x)
            err = float(np.max(np.abs(fast - naive)))
            if err > 1e-9:
                raise NumericError(
                    f"fast/naive disagreement {err:.2e} for {kind} at n={n}")
            W = transform_matrix(kind, n)  # prebuilt so timing sees only the product
            xp = np.concatenate([x, np.zeros(p.padded_dim - n)])
            fast_times = _time_many(lambda: apply_fast(p, x), args.reps)
            naive_times = _time_many(lambda: W @ xp, args.reps)
            fm, fd = _median_mad(fast_times)
            nm, nd = _median_mad(naive_times)
            rows.append({
                "kind": str(kind), "n": n,
                "fast_median_s": fm, "fast_mad_s": fd,
                "naive_median_s": nm, "naive_mad_s": nd,
                "speedup": nm / fm if fm > 0 else float("inf"),
                "ops_naive": f"{p.padded_dim**2} (n^2)",
                "ops_fast": _OPS_FAST.get(kind.tag, "n"),
            })
    print(f"{'kind':>10s} {'n':>6s} {'fast (s)':>12s} {'naive (s)':>12s} {'speedup':>8s}")
    for row in rows:
        print(f"{row['kind']:>10s} {row['n']:>6d} {row['fast_median_s']:>12.3e} "
              f"{row['naive_median_s']:>12.3e} {row['speedup']:>8.1f}")
    if args.out:
        write_bench_report(args.out, rows)
        print(f"bench report written to {args.out}")
    return 0


def _time_many(fn, reps: int) -> list[float]:
    fn()  # warm caches outside the timed region
    out = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        out.append(time.perf_counter() - t0)
    return out


def _median_mad(times: list[float]) -> tuple[float, float]:
    med = float(np.median(times))
    return med, float(np.median(np.abs(np.asarray(times) - med)))


def _add_common_flags(sub) -> None:
    sub.add_argument("--config", help="JSON run config; flags override its entries")
    sub.add_argument("--dataset-format", dest="dataset_format",
                     choices=["csv", "libsvm", "idx", "synth"])
    sub.add_argument("--train")
    sub.add_argument("--test")
    sub.add_argument("--train-images", dest="train_images")
    sub.add_argument("--train-labels", dest="train_labels")
    sub.add_argument("--test-images", dest="test_images")
    sub.add_argument("--test-labels", dest="test_labels")
    sub.add_argument("--label-column", dest="label_column", type=int)
    sub.add_argument("--has-header", dest="has_header", action="store_true")
    sub.add_argument("--delimiter")
    sub.add_argument("--split-fraction", dest="split_fraction", type=float)
    sub.add_argument("--seed", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dtnet",
        description="Layer-wise trained classifiers with deterministic-transform weight blocks")
    subs = parser.add_subparsers(dest="command", required=True)

    tr = subs.add_parser("train", help="train a model and write its report")
    _add_common_flags(tr)
    tr.add_argument("--method", help="1, 2, fixed:<kind>, or random:<seed>")
    tr.add_argument("--gamma", type=float)
    tr.add_argument("--eta-var", dest="eta_var", type=float)
    tr.add_argument("--eta-layer", dest="eta_layer", type=float)
    tr.add_argument("--alpha", type=float)
    tr.add_argument("--mu", type=float)
    tr.add_argument("--lambda0", type=float)
    tr.add_argument("--kmax", type=int)
    tr.add_argument("--lmax", type=int)
    tr.add_argument("--bag", help="comma-separated transform names")
    tr.add_argument("--part2-activation", dest="part2_activation",
                    choices=["relu", "linear"])
    tr.add_argument("--preprocess", choices=["unit", "none", "zscore"])
    tr.add_argument("--subset", type=int, help="seeded training subset size")
    tr.add_argument("--out", help="output directory (model + report)")
    tr.set_defaults(func=cmd_train)

    ev = subs.add_parser("eval", help="evaluate a saved model on a dataset")
    ev.add_argument("model", help="path to model.npz")
    _add_common_flags(ev)
    ev.add_argument("--on", choices=["train", "test"], default="test")
    ev.add_argument("--out", help="directory for confusion.csv / eval.json")
    ev.set_defaults(func=cmd_eval)

    be = subs.add_parser("bench", help="time fast kernels against dense products")
    be.add_argument("--sizes", default="256,1024,4096")
    be.add_argument("--kinds", default="FWHT1,DCT,DB4")
    be.add_argument("--reps", type=int, default=25)
    be.add_argument("--seed", type=int)
    be.add_argument("--out", help="directory for bench.csv / bench.png")
    be.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DataFormatError, ModelFormatError, FileNotFoundError, IsADirectoryError,
            PermissionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericError, DegenerateLayerError, DimensionError,
            np.linalg.LinAlgError, ValueError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
