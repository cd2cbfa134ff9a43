"""Versioned model container: one .npz holding arrays, config, checksum.

The JSON header carries hyperparameters and per-layer metadata; matrices
and masks are stored as named float64/bool arrays. A SHA-256 over the
canonical bytes of every array (in sorted name order) is embedded so a
corrupted file fails loudly instead of predicting garbage. Round-tripping
a model reproduces its in-memory predictions bit for bit.
"""
from __future__ import annotations

import hashlib
import json
import zipfile

import numpy as np

from .errors import ModelFormatError
from .network import HyperParams, LayerRecord, NetworkModel, NormStats, parse_method
from .transforms import parse_kind, plan as make_plan

FORMAT_VERSION = 1


def hp_to_json(hp: HyperParams) -> dict:
    return {
        "lambda0": hp.lambda0, "mu": hp.mu, "alpha": hp.alpha,
        "k_max": hp.k_max, "eta_layer": hp.eta_layer, "eta_var": hp.eta_var,
        "l_max": hp.l_max, "gamma": hp.gamma,
        "bag": [str(k) for k in hp.bag], "method": str(hp.method),
        "part2_activation": hp.part2_activation, "preprocess": hp.preprocess,
    }


def hp_from_json(obj: dict) -> HyperParams:
    return HyperParams(
        lambda0=obj["lambda0"], mu=obj["mu"], alpha=obj["alpha"],
        k_max=obj["k_max"], eta_layer=obj["eta_layer"], eta_var=obj["eta_var"],
        l_max=obj["l_max"], gamma=obj["gamma"],
        bag=tuple(parse_kind(k) for k in obj["bag"]),
        method=parse_method(obj["method"]),
        part2_activation=obj["part2_activation"], preprocess=obj["preprocess"],
    )


def _checksum(arrays: dict[str, np.ndarray]) -> str:
    digest = hashlib.sha256()
    for name in sorted(arrays):
        digest.update(name.encode())
        arr = arrays[name]
        digest.update(str(arr.dtype).encode())
        digest.update(str(arr.shape).encode())
        digest.update(np.ascontiguousarray(arr).tobytes())
    return digest.hexdigest()


def save_model(path, model: NetworkModel) -> None:
    arrays: dict[str, np.ndarray] = {"final_output": model.final_output}
    header = {
        "format_version": FORMAT_VERSION,
        "q": model.q,
        "p": model.p,
        "cost_trace": model.cost_trace,
        "train_accuracy": model.train_accuracy,
        "stopped_early": model.stopped_early,
        "class_names": model.class_names,
        "hyperparams": hp_to_json(model.hp),
        "norm_mode": model.norm_stats.mode,
        "layers": [],
    }
    if model.norm_stats.mode == "zscore":
        arrays["norm_mean"] = model.norm_stats.mean
        arrays["norm_scale"] = model.norm_stats.scale
    for i, rec in enumerate(model.layers):
        header["layers"].append({
            "kind": str(rec.kind), "in_dim": rec.in_dim, "out_dim": rec.out_dim,
        })
        arrays[f"layer{i}_o_prev"] = rec.o_prev
        arrays[f"layer{i}_mask"] = rec.mask
    arrays["header"] = np.frombuffer(
        json.dumps(header, sort_keys=True).encode(), dtype=np.uint8)
    arrays["checksum"] = np.frombuffer(_checksum(
        {k: v for k, v in arrays.items() if k != "checksum"}).encode(), dtype=np.uint8)
    with open(path, "wb") as fh:
        np.savez(fh, **arrays)


def load_model(path) -> NetworkModel:
    try:
        with np.load(path) as npz:
            arrays = {name: npz[name] for name in npz.files}
    except (OSError, ValueError, EOFError, zipfile.BadZipFile) as exc:
        raise ModelFormatError(f"{path}: unreadable or corrupted container: {exc}") from None

    if "checksum" not in arrays or "header" not in arrays:
        raise ModelFormatError(f"{path}: not a model container")
    stored = bytes(arrays.pop("checksum")).decode()
    actual = _checksum(arrays)
    if stored != actual:
        raise ModelFormatError(f"{path}: checksum mismatch, file is corrupted")
    header = json.loads(bytes(arrays["header"]).decode())
    if header.get("format_version") != FORMAT_VERSION:
        raise ModelFormatError(
            f"{path}: unsupported format version {header.get('format_version')}")

    hp = hp_from_json(header["hyperparams"])
    mode = header["norm_mode"]
    if mode == "zscore":
        stats = NormStats(mode, arrays["norm_mean"], arrays["norm_scale"])
    else:
        stats = NormStats(mode)
    layers = []
    for i, meta in enumerate(header["layers"]):
        kind = parse_kind(meta["kind"])
        layers.append(LayerRecord(
            o_prev=arrays[f"layer{i}_o_prev"],
            kind=kind,
            plan=make_plan(kind, meta["in_dim"]),
            mask=arrays[f"layer{i}_mask"],
            in_dim=meta["in_dim"],
            out_dim=meta["out_dim"],
        ))
    return NetworkModel(
        layers=layers,
        final_output=arrays["final_output"],
        cost_trace=list(header["cost_trace"]),
        q=header["q"],
        p=header["p"],
        norm_stats=stats,
        hp=hp,
        train_accuracy=list(header["train_accuracy"]),
        stopped_early=header["stopped_early"],
        class_names=header["class_names"],
    )
