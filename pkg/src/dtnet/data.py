"""Dataset ingestion, target encoding, and synthetic test data.

Supported on-disk formats: delimited text (CSV), sparse index:value text
(LIBSVM), and the big-endian IDX image/label containers (optionally
gzip-compressed). Labels are remapped to a dense 0..Q-1 range in first
appearance order; the mapping travels with the dataset.
"""
from __future__ import annotations

import csv
import gzip
import struct
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DataFormatError, DimensionError

IDX_IMAGES_MAGIC = 0x00000803
IDX_LABELS_MAGIC = 0x00000801


@dataclass
class Dataset:
    """Train/test features (samples as columns) and one-hot targets."""

    x_train: np.ndarray
    t_train: np.ndarray
    x_test: np.ndarray
    t_test: np.ndarray
    class_names: list[str]

    @property
    def p(self) -> int:
        return self.x_train.shape[0]

    @property
    def q(self) -> int:
        return self.t_train.shape[0]

    @property
    def labels_train(self) -> np.ndarray:
        return np.argmax(self.t_train, axis=0)

    @property
    def labels_test(self) -> np.ndarray:
        return np.argmax(self.t_test, axis=0)


def load_csv(path, label_column=-1, has_header=False, delimiter=","):
    """Read a delimited table: (features J-by-P layout transposed, labels).

    ``label_column`` is a column index or, when a header is present, a
    column name. Returns features with samples as columns and the raw label
    strings. Ragged rows and non-numeric feature cells are rejected with
    the line number.
    """
    rows = []
    labels = []
    width = None
    col = label_column if isinstance(label_column, int) else None
    with open(path, newline="") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        for lineno, row in enumerate(reader, start=1):
            if not row:
                continue
            if has_header and lineno == 1:
                if col is None:
                    try:
                        col = [h.strip() for h in row].index(label_column)
                    except ValueError:
                        raise DataFormatError(
                            f"{path}: no column named {label_column!r} in header") from None
                continue
            if col is None:
                raise DataFormatError(
                    f"{path}: a named label column needs has_header=True")
            if width is None:
                width = len(row)
                if width < 2:
                    raise DataFormatError(f"{path}: row {lineno}: need >= 2 columns")
            elif len(row) != width:
                raise DataFormatError(
                    f"{path}: row {lineno}: expected {width} fields, got {len(row)}")
            pos = col if col >= 0 else width + col
            labels.append(row[pos].strip())
            feats = [v for i, v in enumerate(row) if i != pos]
            try:
                rows.append([float(v) for v in feats])
            except ValueError as exc:
                raise DataFormatError(f"{path}: row {lineno}: {exc}") from None
    if not rows:
        raise DataFormatError(f"{path}: no data rows")
    return np.asarray(rows, dtype=np.float64).T, labels


def save_csv(path, X: np.ndarray, labels, delimiter=",") -> None:
    """Write samples (columns of X) as rows with the label appended last."""
    X = np.asarray(X, dtype=np.float64)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, delimiter=delimiter)
        for j in range(X.shape[1]):
            writer.writerow([repr(float(v)) for v in X[:, j]] + [labels[j]])


def load_libsvm(path):
    """Read sparse 1-based index:value lines, densified with zeros."""
    entries = []
    labels = []
    max_index = 0
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split()
            labels.append(parts[0])
            pairs = []
            prev = 0
            for tok in parts[1:]:
                try:
                    idx_s, val_s = tok.split(":", 1)
                    idx, val = int(idx_s), float(val_s)
                except ValueError:
                    raise DataFormatError(
                        f"{path}: line {lineno}: malformed token {tok!r}") from None
                if idx <= prev:
                    raise DataFormatError(
                        f"{path}: line {lineno}: index {idx} not increasing")
                prev = idx
                pairs.append((idx, val))
                max_index = max(max_index, idx)
            entries.append(pairs)
    if not entries:
        raise DataFormatError(f"{path}: no data rows")
    X = np.zeros((max_index, len(entries)))
    for j, pairs in enumerate(entries):
        for idx, val in pairs:
            X[idx - 1, j] = val
    return X, labels


def _read_idx(path, expected_magic):
    opener = gzip.open if str(path).endswith(".gz") else open
    with opener(path, "rb") as fh:
        head = fh.read(4)
        if len(head) < 4:
            raise DataFormatError(f"{path}: truncated header")
        (magic,) = struct.unpack(">i", head)
        if magic != expected_magic:
            raise DataFormatError(
                f"{path}: magic 0x{magic:08x}, expected 0x{expected_magic:08x}")
        ndim = magic & 0xFF
        dims = struct.unpack(f">{ndim}i", fh.read(4 * ndim))
        payload = fh.read()
    count = int(np.prod(dims))
    if len(payload) < count:
        raise DataFormatError(f"{path}: expected {count} bytes, found {len(payload)}")
    return np.frombuffer(payload[:count], dtype=np.uint8).reshape(dims)


def load_idx(images_path, labels_path):
    """Read an IDX image/label pair; pixels scaled to [0, 1], row-major."""
    images = _read_idx(images_path, IDX_IMAGES_MAGIC)
    labels = _read_idx(labels_path, IDX_LABELS_MAGIC)
    if images.shape[0] != labels.shape[0]:
        raise DataFormatError(
            f"count mismatch: {images.shape[0]} images vs {labels.shape[0]} labels")
    X = images.reshape(images.shape[0], -1).T.astype(np.float64) / 255.0
    return X, [str(int(v)) for v in labels]


def one_hot(labels: np.ndarray, q: int) -> np.ndarray:
    """Columns of the identity selected by the integer labels."""
    labels = np.asarray(labels, dtype=np.int64)
    if labels.size and (labels.min() < 0 or labels.max() >= q):
        bad = labels[(labels < 0) | (labels >= q)][0]
        raise DimensionError(f"label {bad} outside [0, {q})")
    T = np.zeros((q, labels.size))
    T[labels, np.arange(labels.size)] = 1.0
    return T


def encode_labels(raw_labels) -> tuple[np.ndarray, list[str]]:
    """Map raw labels to dense indices in first-appearance order."""
    seen: dict[str, int] = {}
    out = np.empty(len(raw_labels), dtype=np.int64)
    for j, lab in enumerate(raw_labels):
        key = str(lab)
        if key not in seen:
            seen[key] = len(seen)
        out[j] = seen[key]
    return out, list(seen)


def unit_norm_samples(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Scale each column to unit length; zero columns are left and flagged."""
    X = np.asarray(X, dtype=np.float64)
    norms = np.linalg.norm(X, axis=0)
    zero = norms < 1e-12
    return X / np.where(zero, 1.0, norms), zero


def split(X, T, fraction, seed):
    """Seeded stratified train/test partition; ``fraction`` goes to train."""
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"fraction must lie in (0, 1), got {fraction}")
    X = np.asarray(X)
    T = np.asarray(T)
    j = X.shape[1]
    labels = np.argmax(T, axis=0)
    rng = np.random.default_rng(seed)
    counts = np.bincount(labels, minlength=T.shape[0])
    if counts.min() >= 2:
        # largest-remainder allocation: per-class floor(fraction * n_c),
        # leftovers to the largest fractional parts, so the train total is
        # round(fraction * J) and class proportions stay within one sample
        q = T.shape[0]
        exact = fraction * counts.astype(float)
        takes = np.floor(exact).astype(int)
        leftover = int(round(fraction * j)) - int(takes.sum())
        order = np.argsort(-(exact - takes), kind="stable")
        for c in order[:max(leftover, 0)]:
            takes[c] += 1
        takes = np.clip(takes, 1, counts - 1)
        train_idx = []
        for c in range(q):
            members = np.flatnonzero(labels == c)
            members = members[rng.permutation(members.size)]
            train_idx.append(members[: takes[c]])
        train_idx = np.sort(np.concatenate(train_idx))
    else:
        warnings.warn("classes with a single sample: falling back to unstratified split")
        perm = rng.permutation(j)
        take = int(round(fraction * j))
        train_idx = np.sort(perm[:take])
    test_idx = np.setdiff1d(np.arange(j), train_idx)
    return (X[:, train_idx], T[:, train_idx]), (X[:, test_idx], T[:, test_idx])


def synth_blobs(classes, dims, samples_per_class, spread, seed) -> Dataset:
    """Gaussian blobs at seeded random centers, fresh draws for the test half."""
    if min(classes, dims, samples_per_class) < 1 or spread < 0:
        raise ValueError("blob parameters must be positive")
    rng = np.random.default_rng(seed)
    centers = rng.standard_normal((dims, classes))
    parts = []
    for subset in range(2):
        cols = []
        labels = []
        for c in range(classes):
            pts = centers[:, [c]] + spread * rng.standard_normal((dims, samples_per_class))
            cols.append(pts)
            labels.extend([c] * samples_per_class)
        X = np.concatenate(cols, axis=1)
        T = one_hot(np.asarray(labels), classes)
        parts.append((X, T))
    (xtr, ttr), (xte, tte) = parts
    return Dataset(xtr, ttr, xte, tte, [str(c) for c in range(classes)])
