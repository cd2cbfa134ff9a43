"""End-to-end CLI behavior: subcommands, reports, exit codes."""
import json

import numpy as np

from dtnet.cli import main
from dtnet.model_io import load_model


def _synth_flags(out, seed=0):
    return ["--dataset-format", "synth", "--out", str(out), "--seed", str(seed)]


class TestTrainCommand:
    def test_writes_model_report_and_figure(self, tmp_path, capsys):
        out = tmp_path / "run"
        rc = main(["train", *_synth_flags(out), "--lambda0", "0.1", "--mu", "10",
                   "--lmax", "3"])
        assert rc == 0
        for name in ("model.npz", "report.json", "layers.csv", "selection.csv",
                     "curves.png"):
            assert (out / name).exists(), name
        report = json.loads((out / "report.json").read_text())
        assert "architecture" in report
        assert report["config"]["hyperparams"]["mu"] == 10.0
        assert len(report["cost_trace"]) == report["num_layers"] + 1
        stdout = capsys.readouterr().out
        assert "architecture:" in stdout
        assert "test accuracy" in stdout

    def test_reruns_are_byte_identical(self, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        flags = ["--lambda0", "0.1", "--mu", "10", "--lmax", "2"]
        assert main(["train", *_synth_flags(out1), *flags]) == 0
        assert main(["train", *_synth_flags(out2), *flags]) == 0
        assert (out1 / "model.npz").read_bytes() == (out2 / "model.npz").read_bytes()

    def test_missing_dataset_file_exits_two(self, tmp_path, capsys):
        rc = main(["train", "--dataset-format", "csv", "--train",
                   str(tmp_path / "absent.csv"), "--out", str(tmp_path / "r")])
        assert rc == 2
        assert "absent.csv" in capsys.readouterr().err

    def test_config_file_with_flag_override(self, tmp_path):
        cfg = {
            "dataset": {"format": "synth", "classes": 3, "dims": 5,
                        "samples_per_class": 40, "spread": 0.2, "seed": 1},
            "hyperparams": {"lambda0": 0.1, "mu": 10.0, "l_max": 2,
                            "method": "1"},
            "out": str(tmp_path / "from_cfg"),
        }
        path = tmp_path / "run.json"
        path.write_text(json.dumps(cfg))
        out = tmp_path / "overridden"
        rc = main(["train", "--config", str(path), "--out", str(out),
                   "--method", "fixed:DCT"])
        assert rc == 0
        report = json.loads((out / "report.json").read_text())
        assert report["config"]["hyperparams"]["method"] == "fixed:DCT"
        assert not (tmp_path / "from_cfg").exists()

    def test_unknown_config_key_rejected(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"dataset": {"format": "synth"}, "typo": 1}))
        rc = main(["train", "--config", str(path)])
        assert rc == 2
        assert "typo" in capsys.readouterr().err

    def test_bag_restriction(self, tmp_path):
        out = tmp_path / "run"
        rc = main(["train", *_synth_flags(out), "--lambda0", "0.1", "--mu", "10",
                   "--bag", "DCT,DHT", "--lmax", "2"])
        assert rc == 0
        model = load_model(out / "model.npz")
        assert all(str(rec.kind) in ("DCT", "DHT") for rec in model.layers)

    def test_random_method(self, tmp_path):
        out = tmp_path / "run"
        rc = main(["train", *_synth_flags(out), "--lambda0", "0.1", "--mu", "10",
                   "--method", "random:5", "--lmax", "2"])
        assert rc == 0
        model = load_model(out / "model.npz")
        assert all(rec.kind.is_random for rec in model.layers)

    def test_subset_flag_limits_training_samples(self, tmp_path):
        out = tmp_path / "run"
        rc = main(["train", *_synth_flags(out), "--lambda0", "0.1", "--mu", "10",
                   "--lmax", "1", "--subset", "60"])
        assert rc == 0
        report = json.loads((out / "report.json").read_text())
        assert report["config"]["subset"] == 60

    def test_csv_train_only_uses_seeded_split(self, tmp_path):
        rng = np.random.default_rng(1)
        lines = []
        for j in range(60):
            feats = rng.standard_normal(4) + (j % 3)
            lines.append(",".join(f"{v:.5f}" for v in feats) + f",c{j % 3}")
        data = tmp_path / "all.csv"
        data.write_text("\n".join(lines) + "\n")
        out = tmp_path / "run"
        rc = main(["train", "--dataset-format", "csv", "--train", str(data),
                   "--split-fraction", "0.5", "--lambda0", "0.1", "--mu", "10",
                   "--lmax", "1", "--out", str(out)])
        assert rc == 0
        report = json.loads((out / "report.json").read_text())
        assert len(report["test_accuracy"]) == report["num_layers"] + 1

    def test_idx_format_end_to_end(self, tmp_path):
        import gzip
        import struct

        rng = np.random.default_rng(0)
        def write_pair(prefix, count):
            imgs = (rng.random((count, 4, 4)) * 255).astype(np.uint8)
            labs = (np.arange(count) % 2).astype(np.uint8)
            imgs[labs == 1, :2] = 255  # separable signal in the top rows
            ip = tmp_path / f"{prefix}-images.idx.gz"
            lp = tmp_path / f"{prefix}-labels.idx.gz"
            with gzip.open(ip, "wb") as fh:
                fh.write(struct.pack(">iiii", 0x0803, count, 4, 4) + imgs.tobytes())
            with gzip.open(lp, "wb") as fh:
                fh.write(struct.pack(">ii", 0x0801, count) + labs.tobytes())
            return ip, lp

        tri, trl = write_pair("train", 60)
        tei, tel = write_pair("t10k", 20)
        out = tmp_path / "run"
        rc = main(["train", "--dataset-format", "idx",
                   "--train-images", str(tri), "--train-labels", str(trl),
                   "--test-images", str(tei), "--test-labels", str(tel),
                   "--lambda0", "0.1", "--mu", "10", "--lmax", "2",
                   "--out", str(out)])
        assert rc == 0
        report = json.loads((out / "report.json").read_text())
        assert report["final_test_accuracy"] > 60.0


class TestEvalCommand:
    def test_eval_train_split_reproduces_logged_accuracy(self, tmp_path, capsys):
        out = tmp_path / "run"
        assert main(["train", *_synth_flags(out), "--lambda0", "0.1",
                     "--mu", "10", "--lmax", "2"]) == 0
        capsys.readouterr()
        rc = main(["eval", str(out / "model.npz"), "--dataset-format", "synth",
                   "--on", "train", "--out", str(out)])
        assert rc == 0
        stdout = capsys.readouterr().out
        model = load_model(out / "model.npz")
        assert f"accuracy: {model.train_accuracy[-1]:.2f}%" in stdout
        assert (out / "confusion.csv").exists()

    def test_accuracy_printed_with_two_decimals(self, tmp_path, capsys):
        out = tmp_path / "run"
        assert main(["train", *_synth_flags(out), "--lambda0", "0.1",
                     "--mu", "10", "--lmax", "1"]) == 0
        capsys.readouterr()
        assert main(["eval", str(out / "model.npz"),
                     "--dataset-format", "synth"]) == 0
        line = [l for l in capsys.readouterr().out.splitlines()
                if l.startswith("accuracy:")][0]
        assert line.split()[1].endswith("%")
        assert "." in line and len(line.split(".")[1].rstrip("%")) == 2

    def test_corrupted_container_exits_two(self, tmp_path, capsys):
        out = tmp_path / "run"
        assert main(["train", *_synth_flags(out), "--lambda0", "0.1",
                     "--mu", "10", "--lmax", "1"]) == 0
        path = out / "model.npz"
        blob = bytearray(path.read_bytes())
        blob[len(blob) // 3] ^= 0xFF
        path.write_bytes(bytes(blob))
        rc = main(["eval", str(path), "--dataset-format", "synth"])
        assert rc == 2

    def test_dimension_mismatch_reported(self, tmp_path, capsys):
        out = tmp_path / "run"
        assert main(["train", *_synth_flags(out), "--lambda0", "0.1",
                     "--mu", "10", "--lmax", "1"]) == 0
        cfg = _write_cfg(tmp_path, {"dataset": {"format": "synth", "dims": 9}})
        rc = main(["eval", str(out / "model.npz"), "--config", cfg])
        assert rc == 1
        assert "features" in capsys.readouterr().err


def _write_cfg(tmp_path, cfg):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    return str(path)


class TestBenchCommand:
    def test_small_bench_writes_table(self, tmp_path, capsys):
        out = tmp_path / "bench"
        rc = main(["bench", "--sizes", "16,64", "--kinds", "FWHT1,DB4",
                   "--reps", "3", "--out", str(out)])
        assert rc == 0
        assert (out / "bench.csv").exists()
        assert (out / "bench.png").exists()
        lines = (out / "bench.csv").read_text().strip().splitlines()
        assert len(lines) == 1 + 4  # header + one row per (kind, size)
        stdout = capsys.readouterr().out
        assert "speedup" in stdout

    def test_too_small_size_rejected(self, capsys):
        assert main(["bench", "--sizes", "2", "--kinds", "DCT"]) == 2

    def test_unknown_kind_rejected(self, capsys):
        assert main(["bench", "--sizes", "16", "--kinds", "DFT"]) == 1
