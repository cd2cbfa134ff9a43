"""Feedforward classifiers trained layer by layer, no backpropagation.

Hidden-layer weight matrices pair a copy of the previously trained readout
with a fast deterministic transform (DCT, Walsh-Hadamard, Hartley, Haar, or
one of several wavelet filter banks), selected per layer by unsupervised
scoring. Only per-layer convex problems are ever solved: ridge regression
at the input and ball-constrained least squares above it.
"""

from . import data, optim, selection, transforms
from .model_io import load_model, save_model
from .network import (
    HyperParams,
    Method,
    NetworkModel,
    accuracy,
    parse_method,
    predict,
    train,
)
from .report import architecture_string

__version__ = "0.1.0"

__all__ = [
    "HyperParams", "Method", "NetworkModel", "train", "predict", "accuracy",
    "parse_method", "save_model", "load_model", "architecture_string",
    "transforms", "optim", "selection", "data", "__version__",
]
