"""Unsupervised scoring and selection of the per-layer transform.

Two scoring rules, both computed on the pruned and normalized transform
output of the candidate layer:

* spread scoring: the standard deviation, across nodes, of the per-node
  standard deviations — small means information is spread evenly;
* correlation-spectrum scoring: how many leading singular values of the
  input/output Pearson correlation matrix are needed to cover a fraction
  ``gamma`` of the spectrum mass, normalized to a 0-100 scale.

The candidate with the smallest primary score wins; correlation-spectrum
ties fall to the larger covered mass, and any remaining tie to bag order.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateLayerError, DimensionError
from .transforms import TransformKind


@dataclass(frozen=True)
class SelectionScore:
    """Scores of one candidate kind; ``sc2`` is 0 under spread scoring."""

    kind: TransformKind
    sc1: float
    sc2: float
    kept_nodes: int
    degenerate: bool = False


def row_std(Z: np.ndarray) -> np.ndarray:
    """Per-row population standard deviation (divisor J)."""
    Z = np.asarray(Z, dtype=np.float64)
    if Z.shape[1] < 2:
        raise DimensionError("need at least 2 samples to estimate node spread")
    return Z.std(axis=1)


def method1_score(Z2: np.ndarray) -> float:
    """Spread of the per-node standard deviations (population convention)."""
    Z2 = np.asarray(Z2, dtype=np.float64)
    if Z2.shape[0] == 0:
        raise DegenerateLayerError("no surviving nodes to score")
    return float(row_std(Z2).std())


def correlation_matrix(X: np.ndarray, Z2: np.ndarray) -> np.ndarray:
    """Pearson correlations between input features and transform nodes.

    Rows index input features, columns index nodes. Zero-variance rows on
    either side yield zero correlations rather than NaN; dead input
    features are common in real data and must not poison the spectrum.
    """
    X = np.asarray(X, dtype=np.float64)
    Z2 = np.asarray(Z2, dtype=np.float64)
    if X.shape[1] != Z2.shape[1]:
        raise DimensionError(
            f"sample counts differ: X has {X.shape[1]}, Z2 has {Z2.shape[1]}")
    if X.shape[1] < 2:
        raise DimensionError("need at least 2 samples for correlations")
    j = X.shape[1]
    xc = X - X.mean(axis=1, keepdims=True)
    zc = Z2 - Z2.mean(axis=1, keepdims=True)
    cov = (xc @ zc.T) / j
    sx = X.std(axis=1)
    sz = Z2.std(axis=1)
    denom = np.outer(sx, sz)
    out = np.zeros_like(cov)
    np.divide(cov, denom, out=out, where=denom > 0)
    return out


def cumulative_singular(R: np.ndarray) -> tuple[np.ndarray, bool]:
    """Normalized running sum of the singular values of ``R``.

    Returns the non-decreasing curve ending at 1 and a degeneracy flag set
    when every singular value is zero (curve forced to all ones).
    """
    R = np.asarray(R, dtype=np.float64)
    if not np.all(np.isfinite(R)):
        raise ValueError("non-finite correlation matrix")
    sv = np.linalg.svd(R, compute_uv=False)
    total = sv.sum()
    if total <= 0:
        return np.ones(sv.shape[0]), True
    return np.cumsum(sv) / total, False


def method2_from_correlation(R: np.ndarray, gamma: float) -> tuple[float, float]:
    """(sc1, sc2) of a given correlation matrix at threshold ``gamma``.

    sc1 = 100 * idx / K where idx is the first (1-based) index at which the
    cumulative curve reaches gamma and K the number of singular values;
    sc2 is the curve value at idx.
    """
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    curve, _ = cumulative_singular(R)
    k_total = curve.shape[0]
    idx = int(np.argmax(curve >= gamma)) + 1
    return 100.0 * idx / k_total, float(curve[idx - 1])


def method2_score(X: np.ndarray, Z2: np.ndarray, gamma: float) -> tuple[float, float]:
    """Correlation-spectrum scores between input features and layer nodes."""
    return method2_from_correlation(correlation_matrix(X, Z2), gamma)


def select_transform(bag, Y_prev, X, hp) -> tuple[TransformKind, list[SelectionScore], tuple]:
    """Score every bag kind on the candidate layer and pick the winner.

    Returns the winning kind, the full score table in bag order, and the
    winner's already-computed (Z2, mask) pair so the caller does not redo
    the transform. Kinds whose nodes are all pruned are skipped; if that
    happens to the whole bag the layer cannot be built.
    """
    from .network import part2_forward  # cycle: network builds layers from selections

    if not bag:
        raise ValueError("transform bag is empty")
    scores: list[SelectionScore] = []
    best = None  # (sc1, -sc2, position), winner payload
    for pos, kind in enumerate(bag):
        try:
            Z2, mask = part2_forward(kind, Y_prev, hp.eta_var)
        except DegenerateLayerError:
            scores.append(SelectionScore(kind, float("inf"), 0.0, 0, degenerate=True))
            continue
        if hp.method.mode == "method2":
            sc1, sc2 = method2_score(X, Z2, hp.gamma)
        else:
            sc1, sc2 = method1_score(Z2), 0.0
        scores.append(SelectionScore(kind, sc1, sc2, int(mask.sum())))
        key = (sc1, -sc2, pos)
        if best is None or key < best[0]:
            best = (key, kind, (Z2, mask))
    if best is None:
        raise DegenerateLayerError("every transform in the bag was pruned away")
    return best[1], scores, best[2]
