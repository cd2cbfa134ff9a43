"""Loaders, encodings, splitting, and synthetic data."""
import gzip
import struct

import numpy as np
import pytest

from dtnet.data import (
    Dataset,
    encode_labels,
    load_csv,
    load_idx,
    load_libsvm,
    one_hot,
    save_csv,
    split,
    synth_blobs,
    unit_norm_samples,
)
from dtnet.errors import DataFormatError, DimensionError


class TestCsv:
    def test_three_rows_two_classes(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("1.0,2.0,a\n3.0,4.0,b\n5.0,6.0,a\n")
        X, labels = load_csv(path)
        assert X.shape == (2, 3)
        idx, names = encode_labels(labels)
        assert names == ["a", "b"]
        assert list(idx) == [0, 1, 0]

    def test_ragged_row_names_line(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("1,2,a\n3,b\n")
        with pytest.raises(DataFormatError, match="row 2"):
            load_csv(path)

    def test_header_skipped(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("f1,f2,label\n1,2,a\n")
        X, labels = load_csv(path, has_header=True)
        assert X.shape == (2, 1)
        assert labels == ["a"]

    def test_non_numeric_feature_rejected(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("1,x,a\n")
        with pytest.raises(DataFormatError, match="row 1"):
            load_csv(path)

    def test_label_column_selectable(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("a,1,2\nb,3,4\n")
        X, labels = load_csv(path, label_column=0)
        assert labels == ["a", "b"]
        assert np.array_equal(X, [[1.0, 3.0], [2.0, 4.0]])

    def test_label_column_by_name(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("x,species,y\n1,cat,2\n3,dog,4\n")
        X, labels = load_csv(path, label_column="species", has_header=True)
        assert labels == ["cat", "dog"]
        assert np.array_equal(X, [[1.0, 3.0], [2.0, 4.0]])

    def test_unknown_label_name_rejected(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("x,y\n1,2\n")
        with pytest.raises(DataFormatError, match="no column named"):
            load_csv(path, label_column="label", has_header=True)

    def test_round_trip_through_save(self, tmp_path):
        rng = np.random.default_rng(0)
        X = rng.standard_normal((4, 7))
        labels = [str(i % 3) for i in range(7)]
        path = tmp_path / "out.csv"
        save_csv(path, X, labels)
        X2, labels2 = load_csv(path)
        assert labels2 == labels
        assert np.max(np.abs(X2 - X)) < 1e-12


class TestLibsvm:
    def test_sparse_line_densified(self, tmp_path):
        path = tmp_path / "d.txt"
        path.write_text("1 1:0.5 3:2\n")
        X, labels = load_libsvm(path)
        assert labels == ["1"]
        assert np.array_equal(X[:, 0], [0.5, 0.0, 2.0])

    def test_empty_feature_list_is_zero_row(self, tmp_path):
        path = tmp_path / "d.txt"
        path.write_text("2 1:1\n3\n")
        X, labels = load_libsvm(path)
        assert np.array_equal(X[:, 1], [0.0])
        assert labels == ["2", "3"]

    def test_duplicate_index_rejected(self, tmp_path):
        path = tmp_path / "d.txt"
        path.write_text("1 2:1 2:3\n")
        with pytest.raises(DataFormatError, match="line 1"):
            load_libsvm(path)

    def test_malformed_token_rejected(self, tmp_path):
        path = tmp_path / "d.txt"
        path.write_text("1 nonsense\n")
        with pytest.raises(DataFormatError, match="line 1"):
            load_libsvm(path)

    def test_round_trip_through_csv(self, tmp_path):
        path = tmp_path / "d.txt"
        path.write_text("1 1:0.25 2:-3\n2 2:1\n1 3:9\n")
        X, labels = load_libsvm(path)
        out = tmp_path / "d.csv"
        save_csv(out, X, labels)
        X2, labels2 = load_csv(out)
        assert np.max(np.abs(X2 - X)) < 1e-12
        assert labels2 == labels


def _write_idx_pair(tmp_path, images, labels, gz=False):
    img_path = tmp_path / ("img.idx" + (".gz" if gz else ""))
    lab_path = tmp_path / ("lab.idx" + (".gz" if gz else ""))
    images = np.asarray(images, dtype=np.uint8)
    labels = np.asarray(labels, dtype=np.uint8)
    img_bytes = struct.pack(">iiii", 0x0803, *images.shape) + images.tobytes()
    lab_bytes = struct.pack(">ii", 0x0801, labels.shape[0]) + labels.tobytes()
    opener = gzip.open if gz else open
    with opener(img_path, "wb") as fh:
        fh.write(img_bytes)
    with opener(lab_path, "wb") as fh:
        fh.write(lab_bytes)
    return img_path, lab_path


class TestIdx:
    def test_two_by_two_image_scaled(self, tmp_path):
        img, lab = _write_idx_pair(tmp_path, [[[0, 255], [0, 255]]], [7])
        X, labels = load_idx(img, lab)
        assert np.array_equal(X[:, 0], [0.0, 1.0, 0.0, 1.0])
        assert labels == ["7"]

    def test_gzip_transparent(self, tmp_path):
        img, lab = _write_idx_pair(tmp_path, [[[128, 0], [0, 0]]], [3], gz=True)
        X, labels = load_idx(img, lab)
        assert abs(X[0, 0] - 128 / 255) < 1e-12
        assert labels == ["3"]

    def test_magic_mismatch_rejected(self, tmp_path):
        img, lab = _write_idx_pair(tmp_path, [[[0, 0], [0, 0]]], [1])
        with pytest.raises(DataFormatError, match="magic"):
            load_idx(lab, lab)

    def test_truncated_rejected(self, tmp_path):
        img, lab = _write_idx_pair(tmp_path, [[[0, 0], [0, 0]]], [1])
        data = img.read_bytes()
        img.write_bytes(data[:-2])
        with pytest.raises(DataFormatError, match="bytes"):
            load_idx(img, lab)

    def test_count_mismatch_rejected(self, tmp_path):
        img, _ = _write_idx_pair(tmp_path, [[[0, 0], [0, 0]]], [1])
        _, lab = _write_idx_pair(tmp_path, [[[0, 0], [0, 0]]], [1, 2])
        with pytest.raises(DataFormatError, match="mismatch"):
            load_idx(img, lab)


class TestEncoding:
    def test_one_hot_columns(self):
        T = one_hot(np.array([0, 2]), 3)
        assert np.array_equal(T, [[1, 0], [0, 0], [0, 1]])

    def test_single_class_all_ones(self):
        assert np.array_equal(one_hot(np.array([0, 0, 0]), 1), [[1, 1, 1]])

    def test_out_of_range_rejected(self):
        with pytest.raises(DimensionError):
            one_hot(np.array([5]), 3)

    def test_columns_sum_to_one(self):
        rng = np.random.default_rng(1)
        labels = rng.integers(0, 4, size=30)
        assert np.array_equal(one_hot(labels, 4).sum(axis=0), np.ones(30))

    def test_first_appearance_order(self):
        idx, names = encode_labels(["z", "a", "z", "m"])
        assert names == ["z", "a", "m"]
        assert list(idx) == [0, 1, 0, 2]


class TestUnitNorm:
    def test_three_four_five(self):
        X, flags = unit_norm_samples(np.array([[3.0], [4.0]]))
        assert np.allclose(X[:, 0], [0.6, 0.8])
        assert not flags[0]

    def test_zero_column_flagged_and_kept(self):
        X, flags = unit_norm_samples(np.zeros((3, 1)))
        assert np.array_equal(X, np.zeros((3, 1)))
        assert flags[0]

    def test_unit_column_unchanged(self):
        col = np.array([[1.0], [0.0]])
        X, _ = unit_norm_samples(col)
        assert np.max(np.abs(X - col)) < 1e-15


class TestSplit:
    def _toy(self, j=10, q=2):
        rng = np.random.default_rng(2)
        X = rng.standard_normal((3, j))
        T = one_hot(np.arange(j) % q, q)
        return X, T

    def test_same_seed_same_split(self):
        X, T = self._toy()
        a = split(X, T, 0.5, seed=7)
        b = split(X, T, 0.5, seed=7)
        assert np.array_equal(a[0][0], b[0][0])
        assert np.array_equal(a[1][0], b[1][0])

    def test_half_split_counts(self):
        X, T = self._toy(10)
        (xtr, _), (xte, _) = split(X, T, 0.5, seed=0)
        assert xtr.shape[1] == 5 and xte.shape[1] == 5

    def test_stratified_proportions(self):
        X, T = self._toy(j=40, q=4)
        (_, ttr), (_, tte) = split(X, T, 0.75, seed=1)
        for c in range(4):
            total = T[c].sum()
            assert abs(ttr[c].sum() - 0.75 * total) <= 1

    def test_partition_property(self):
        X, T = self._toy(j=21, q=3)
        X[0] = np.arange(21)  # unique marker per sample
        (xtr, _), (xte, _) = split(X, T, 0.6, seed=3)
        together = np.sort(np.concatenate([xtr[0], xte[0]]))
        assert np.array_equal(together, np.arange(21))


class TestSynthBlobs:
    def test_shapes_and_classes(self):
        ds = synth_blobs(2, 2, 5, 0.1, seed=0)
        assert isinstance(ds, Dataset)
        assert ds.p == 2 and ds.q == 2
        assert ds.x_train.shape == (2, 10)
        assert ds.t_test.shape == (2, 10)

    def test_seed_reproducibility(self):
        a = synth_blobs(3, 4, 6, 0.2, seed=5)
        b = synth_blobs(3, 4, 6, 0.2, seed=5)
        assert np.array_equal(a.x_train, b.x_train)
        assert np.array_equal(a.x_test, b.x_test)

    def test_tight_blobs_linearly_classifiable(self):
        from dtnet.network import HyperParams, accuracy, predict, train

        ds = synth_blobs(3, 5, 40, 0.01, seed=8)
        model = train(ds.x_train, ds.t_train, HyperParams(eta_layer=1e9, lambda0=1e-3))
        assert model.train_accuracy[0] > 99.0
        assert accuracy(predict(model, ds.x_test), ds.labels_test) > 99.0
