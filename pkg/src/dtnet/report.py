"""Run reports: machine-readable JSON, delimited tables, rendered figures."""
from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .network import NetworkModel  # noqa: E402


def architecture_string(model: NetworkModel) -> str:
    """Per-layer widths and transforms, e.g. ``24-24 (DB4-DCT)``."""
    if not model.layers:
        return "(linear classifier, no hidden layers)"
    widths = "-".join(str(w) for w in model.widths)
    kinds = "-".join(str(rec.kind) for rec in model.layers)
    return f"{widths} ({kinds})"


def training_payload(model: NetworkModel, config_echo: dict,
                     test_accuracy: list[float] | None = None) -> dict:
    """Everything a run report needs, as one JSON-serializable document."""
    layers = []
    for i, rec in enumerate(model.layers):
        entry = {
            "layer": i + 1,
            "transform": str(rec.kind),
            "in_dim": rec.in_dim,
            "out_dim": rec.out_dim,
            "kept_nodes": int(rec.mask.sum()),
            "cost": model.cost_trace[i + 1],
            "train_accuracy": model.train_accuracy[i + 1],
        }
        if test_accuracy is not None:
            entry["test_accuracy"] = test_accuracy[i + 1]
        if i < len(model.selection_log) and model.selection_log[i]:
            entry["selection"] = [
                {"kind": str(s.kind),
                 "sc1": s.sc1 if np.isfinite(s.sc1) else None,
                 "sc2": s.sc2 if np.isfinite(s.sc2) else None,
                 "kept_nodes": s.kept_nodes, "degenerate": s.degenerate}
                for s in model.selection_log[i]
            ]
        layers.append(entry)
    payload = {
        "config": config_echo,
        "architecture": architecture_string(model),
        "num_layers": len(model.layers),
        "cost_trace": model.cost_trace,
        "train_accuracy": model.train_accuracy,
        "stopped_early": model.stopped_early,
        "layer0": {"cost": model.cost_trace[0], "train_accuracy": model.train_accuracy[0]},
        "layers": layers,
    }
    if test_accuracy is not None:
        payload["test_accuracy"] = test_accuracy
        payload["final_test_accuracy"] = test_accuracy[-1]
    payload["final_train_accuracy"] = model.train_accuracy[-1]
    return payload


def write_training_report(outdir, payload: dict) -> None:
    """Emit report.json, layers.csv, selection.csv, and curves.png."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    with open(outdir / "report.json", "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")

    with open(outdir / "layers.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        cols = ["layer", "transform", "out_dim", "kept_nodes", "cost", "train_accuracy"]
        has_test = "test_accuracy" in payload
        if has_test:
            cols.append("test_accuracy")
        writer.writerow(cols)
        row0 = [0, "-", "-", "-", payload["cost_trace"][0], payload["train_accuracy"][0]]
        if has_test:
            row0.append(payload["test_accuracy"][0])
        writer.writerow(row0)
        for entry in payload["layers"]:
            row = [entry["layer"], entry["transform"], entry["out_dim"],
                   entry["kept_nodes"], entry["cost"], entry["train_accuracy"]]
            if has_test:
                row.append(entry["test_accuracy"])
            writer.writerow(row)

    with open(outdir / "selection.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["layer", "kind", "sc1", "sc2", "kept_nodes", "degenerate"])
        for entry in payload["layers"]:
            for s in entry.get("selection", []):
                writer.writerow([entry["layer"], s["kind"], s["sc1"], s["sc2"],
                                 s["kept_nodes"], s["degenerate"]])

    _plot_curves(outdir / "curves.png", payload)


def _plot_curves(path, payload: dict) -> None:
    xs = list(range(len(payload["cost_trace"])))
    fig, (ax_cost, ax_acc) = plt.subplots(1, 2, figsize=(9, 3.5))
    ax_cost.plot(xs, payload["cost_trace"], "o-", color="tab:blue")
    ax_cost.set_xlabel("layer")
    ax_cost.set_ylabel("training cost")
    ax_cost.set_title("cost per layer")
    ax_acc.plot(xs, payload["train_accuracy"], "o-", label="train")
    if "test_accuracy" in payload:
        ax_acc.plot(xs, payload["test_accuracy"], "s-", label="test")
    ax_acc.set_xlabel("layer")
    ax_acc.set_ylabel("accuracy (%)")
    ax_acc.set_title("accuracy per layer")
    ax_acc.legend()
    fig.suptitle(payload.get("architecture", ""), fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_bench_report(outdir, rows: list[dict]) -> None:
    """Emit bench.csv and bench.png from timing rows."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    cols = ["kind", "n", "fast_median_s", "fast_mad_s", "naive_median_s",
            "naive_mad_s", "speedup", "ops_naive", "ops_fast"]
    with open(outdir / "bench.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(cols)
        for row in rows:
            writer.writerow([row[c] for c in cols])

    fig, ax = plt.subplots(figsize=(6, 4))
    kinds = sorted({row["kind"] for row in rows})
    for kind in kinds:
        sub = sorted((r for r in rows if r["kind"] == kind), key=lambda r: r["n"])
        ns = [r["n"] for r in sub]
        ax.plot(ns, [r["fast_median_s"] for r in sub], "o-", label=f"{kind} fast")
        ax.plot(ns, [r["naive_median_s"] for r in sub], "s--", label=f"{kind} naive")
    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.set_xlabel("input length")
    ax.set_ylabel("median seconds per apply")
    ax.set_title("fast kernels vs dense matrix-vector")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(outdir / "bench.png", dpi=120)
    plt.close(fig)
