"""Layer-wise construction and training of the transform-block classifier.

Each hidden layer's weight block stacks a fixed duplicate-and-negate copy
of the previous layer's trained readout on top of a deterministic
transform. Only the readout is ever optimized (ridge for layer 0,
ball-constrained least squares afterwards), so training never needs
gradients through the network. ReLU over the duplicated part preserves the
previous prediction exactly ([I -I] recombination undoes it), which is what
makes the training cost non-increasing in depth.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateLayerError, DimensionError
from .optim import AdmmConfig, admm_constrained_ls, ridge_solve, training_cost
from .selection import SelectionScore, select_transform
from .transforms import (
    TransformKind,
    TransformPlan,
    apply_fast_block,
    bag_default,
    plan as make_plan,
    random_kind,
)

_NORM_FLOOR = 1e-12


@dataclass(frozen=True)
class Method:
    """How the per-layer transform is chosen.

    ``method1``/``method2`` run the unsupervised scoring over the bag;
    ``fixed`` always uses ``kind``; ``random`` draws a fresh seeded
    Gaussian block per layer (the random-matrix baseline).
    """

    mode: str
    kind: TransformKind | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.mode not in ("method1", "method2", "fixed", "random"):
            raise ValueError(f"unknown method mode {self.mode!r}")
        if self.mode == "fixed" and self.kind is None:
            raise ValueError("fixed method requires a transform kind")
        if self.mode == "random" and self.seed is None:
            raise ValueError("random method requires a seed")

    def __str__(self) -> str:
        if self.mode == "fixed":
            return f"fixed:{self.kind}"
        if self.mode == "random":
            return f"random:{self.seed}"
        return self.mode


def parse_method(text: str) -> Method:
    from .transforms import parse_kind

    text = text.strip().lower()
    if text in ("1", "method1"):
        return Method("method1")
    if text in ("2", "method2"):
        return Method("method2")
    if text.startswith("fixed:"):
        return Method("fixed", kind=parse_kind(text.split(":", 1)[1]))
    if text.startswith("random:"):
        return Method("random", seed=int(text.split(":", 1)[1]))
    raise ValueError(f"cannot parse method {text!r}")


@dataclass(frozen=True)
class HyperParams:
    """Every scalar knob of training, with the standard defaults."""

    lambda0: float = 1.0
    mu: float = 1e3
    alpha: float = 2.0
    k_max: int = 100
    eta_layer: float = 0.1
    eta_var: float = 1e-7
    l_max: int = 20
    gamma: float = 0.8
    bag: tuple[TransformKind, ...] = field(default_factory=lambda: tuple(bag_default()))
    method: Method = Method("method2")
    part2_activation: str = "relu"
    preprocess: str = "unit"

    def __post_init__(self):
        if self.lambda0 < 0:
            raise ValueError("lambda0 must be non-negative")
        if not self.mu > 0:
            raise ValueError("mu must be positive")
        if self.alpha < 1:
            raise ValueError("alpha must be >= 1")
        if self.k_max < 1 or self.l_max < 1:
            raise ValueError("k_max and l_max must be positive")
        if not self.eta_layer > 0 or not self.eta_var > 0:
            raise ValueError("eta_layer and eta_var must be positive")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")
        if not self.bag:
            raise ValueError("bag must be non-empty")
        if self.part2_activation not in ("relu", "linear"):
            raise ValueError("part2_activation must be 'relu' or 'linear'")
        if self.preprocess not in ("unit", "none", "zscore"):
            raise ValueError("preprocess must be 'unit', 'none', or 'zscore'")


@dataclass(frozen=True)
class NormStats:
    """Input preprocessing recorded at training time, reused at inference."""

    mode: str
    mean: np.ndarray | None = None
    scale: np.ndarray | None = None


@dataclass(frozen=True)
class LayerRecord:
    """Trained state of one hidden layer."""

    o_prev: np.ndarray  # readout trained after the previous layer, feeds the duplicate block
    kind: TransformKind
    plan: TransformPlan
    mask: np.ndarray  # surviving transform rows, estimated once during training
    in_dim: int
    out_dim: int


@dataclass
class NetworkModel:
    """Ordered layers plus the final readout and the training-cost trace."""

    layers: list[LayerRecord]
    final_output: np.ndarray
    cost_trace: list[float]
    q: int
    p: int
    norm_stats: NormStats
    hp: HyperParams
    selection_log: list[list[SelectionScore]] = field(default_factory=list)
    train_accuracy: list[float] = field(default_factory=list)
    stopped_early: bool = False
    class_names: list[str] | None = None

    @property
    def widths(self) -> list[int]:
        return [rec.out_dim for rec in self.layers]


def build_vq(q: int) -> np.ndarray:
    """The duplicate-and-negate block: identity stacked on negated identity."""
    if q < 1:
        raise DimensionError(f"q must be >= 1, got {q}")
    eye = np.eye(q)
    return np.concatenate([eye, -eye], axis=0)


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def prune_mask(Z: np.ndarray, eta_var: float) -> np.ndarray:
    """True for rows whose population variance reaches ``eta_var``."""
    Z = np.asarray(Z, dtype=np.float64)
    if Z.ndim != 2 or Z.shape[1] < 2:
        raise DimensionError("variance pruning needs a matrix with >= 2 samples")
    return Z.var(axis=1) >= eta_var


def _normalize_columns(Z: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(Z, axis=0, keepdims=True)
    return Z / np.where(norms < _NORM_FLOOR, 1.0, norms)


def part2_forward(kind: TransformKind, Y_prev: np.ndarray,
                  eta_var: float) -> tuple[np.ndarray, np.ndarray]:
    """Transform, prune low-variance rows, unit-normalize each column.

    Returns the surviving block and the boolean row mask; the mask must be
    stored and reused verbatim at inference.
    """
    Y_prev = np.asarray(Y_prev, dtype=np.float64)
    p = make_plan(kind, Y_prev.shape[0])
    raw = apply_fast_block(p, Y_prev)
    mask = prune_mask(raw, eta_var)
    if not mask.any():
        raise DegenerateLayerError(
            f"all {raw.shape[0]} transform nodes pruned for {kind}")
    return _normalize_columns(raw[mask]), mask


def _part2_inference(rec: LayerRecord, Y_prev: np.ndarray) -> np.ndarray:
    raw = apply_fast_block(rec.plan, Y_prev)
    return _normalize_columns(raw[rec.mask])


def layer_forward(rec: LayerRecord, Y_prev: np.ndarray,
                  part2_activation: str = "relu",
                  t_hat_prev: np.ndarray | None = None) -> np.ndarray:
    """One layer's output: ReLU over [duplicate block; transform block]."""
    Y_prev = np.asarray(Y_prev, dtype=np.float64)
    if Y_prev.shape[0] != rec.in_dim:
        raise DimensionError(
            f"layer expects {rec.in_dim} input rows, got {Y_prev.shape[0]}")
    if t_hat_prev is None:
        t_hat_prev = rec.o_prev @ Y_prev
    z1 = np.concatenate([t_hat_prev, -t_hat_prev], axis=0)
    z2 = _part2_inference(rec, Y_prev)
    if part2_activation == "relu":
        return relu(np.concatenate([z1, z2], axis=0))
    return np.concatenate([relu(z1), z2], axis=0)


def _apply_norm(stats: NormStats, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if stats.mode == "none":
        return X
    if stats.mode == "unit":
        norms = np.linalg.norm(X, axis=0, keepdims=True)
        scaled = X / np.where(norms < _NORM_FLOOR, 1.0, norms)
        return scaled
    return (X - stats.mean[:, None]) / stats.scale[:, None]


def _fit_norm(mode: str, X: np.ndarray) -> NormStats:
    if mode == "zscore":
        std = X.std(axis=1)
        return NormStats("zscore", X.mean(axis=1), np.where(std < _NORM_FLOOR, 1.0, std))
    return NormStats(mode)


def _pick_kind(hp: HyperParams, layer_index: int, Y_prev: np.ndarray,
               X0: np.ndarray) -> tuple[TransformKind, list[SelectionScore], tuple | None]:
    if hp.method.mode == "fixed":
        return hp.method.kind, [], None
    if hp.method.mode == "random":
        return random_kind(hp.method.seed * 1000 + layer_index), [], None
    return select_transform(hp.bag, Y_prev, X0, hp)


def train(X: np.ndarray, T: np.ndarray, hp: HyperParams | None = None) -> NetworkModel:
    """Grow and train the network until the cost saturates.

    Plan: fit the layer-0 ridge readout; then repeatedly pick a transform,
    form the next layer, re-fit the readout under the ball constraint, and
    stop at ``l_max`` layers or when the relative cost improvement
    (old - new) / old drops below ``eta_layer``.
    """
    hp = hp or HyperParams()
    X = np.asarray(X, dtype=np.float64)
    T = np.asarray(T, dtype=np.float64)
    if X.ndim != 2 or T.ndim != 2 or X.shape[1] != T.shape[1]:
        raise DimensionError("X and T must be matrices over the same samples")
    if X.shape[1] < 2:
        raise DimensionError("training needs at least 2 samples")
    q = T.shape[0]
    stats = _fit_norm(hp.preprocess, X)
    Y = _apply_norm(stats, X)
    X0 = Y  # selection correlates against the network input, post-preprocessing
    truth = np.argmax(T, axis=0)

    O = ridge_solve(Y, T, hp.lambda0)
    cost = training_cost(O, Y, T)
    model = NetworkModel([], O, [cost], q, X.shape[0], stats, hp)
    model.train_accuracy.append(accuracy(np.argmax(O @ Y, axis=0), truth))

    cfg = AdmmConfig(hp.mu, hp.k_max, 2.0 * hp.alpha * q)

    for layer_index in range(1, hp.l_max + 1):
        try:
            kind, scores, winner = _pick_kind(hp, layer_index, Y, X0)
            if winner is None:
                z2, mask = part2_forward(kind, Y, hp.eta_var)
            else:
                z2, mask = winner
        except DegenerateLayerError as exc:
            warnings.warn(f"stopping growth at layer {layer_index}: {exc}")
            model.stopped_early = True
            break
        t_hat = O @ Y
        z1 = np.concatenate([t_hat, -t_hat], axis=0)
        if hp.part2_activation == "relu":
            Y_next = relu(np.concatenate([z1, z2], axis=0))
        else:
            Y_next = np.concatenate([relu(z1), z2], axis=0)

        O_next = admm_constrained_ls(Y_next, T, cfg)
        new_cost = training_cost(O_next, Y_next, T)
        prev_cost = model.cost_trace[-1]
        # saturation: a layer that fails to improve the cost by eta_layer
        # (relative) is discarded and growth stops, so every kept layer
        # earns its keep and the trace decreases by construction
        if prev_cost <= 0 or (prev_cost - new_cost) / prev_cost < hp.eta_layer:
            break
        p = make_plan(kind, Y.shape[0])
        rec = LayerRecord(O, kind, p, mask, Y.shape[0], 2 * q + int(mask.sum()))
        model.layers.append(rec)
        model.selection_log.append(scores)
        model.cost_trace.append(new_cost)
        O, Y = O_next, Y_next
        model.final_output = O
        model.train_accuracy.append(accuracy(np.argmax(O @ Y, axis=0), truth))
    return model


def forward_trace(model: NetworkModel, X: np.ndarray):
    """Yield the readout predictions (scores matrix) after every layer."""
    Y = _apply_norm(model.norm_stats, np.asarray(X, dtype=np.float64))
    if Y.shape[0] != model.p:
        raise DimensionError(f"expected {model.p} features, got {Y.shape[0]}")
    act = model.hp.part2_activation
    for rec in model.layers:
        t_hat = rec.o_prev @ Y
        yield t_hat
        Y = layer_forward(rec, Y, act, t_hat_prev=t_hat)
    yield model.final_output @ Y


def predict(model: NetworkModel, X: np.ndarray) -> np.ndarray:
    """Class index per column; ties resolve to the lowest index."""
    for scores in forward_trace(model, X):
        pass
    return np.argmax(scores, axis=0)


def accuracy(pred: np.ndarray, truth: np.ndarray) -> float:
    """Matching fraction in percent."""
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    if pred.shape != truth.shape:
        raise DimensionError("prediction and truth lengths differ")
    return 100.0 * float(np.mean(pred == truth))
