"""Applying transforms: fast kernels, dense reference, validation."""
from __future__ import annotations

import numpy as np
import scipy.fft

from ..errors import DimensionError, NumericError
from .dense import matrix_for_plan
from .fwht import fwht_natural, fwht_sequency
from .kinds import TransformPlan
from .wavelets import analyze


def _check_block(p: TransformPlan, block: np.ndarray) -> np.ndarray:
    block = np.asarray(block, dtype=np.float64)
    if block.ndim not in (1, 2):
        raise DimensionError("expected a vector or a 2-D block of column signals")
    if block.shape[0] != p.input_dim:
        raise DimensionError(
            f"signal length {block.shape[0]} does not match plan input_dim {p.input_dim}")
    if not np.all(np.isfinite(block)):
        raise NumericError("non-finite values in transform input")
    return block


def _padded(p: TransformPlan, block: np.ndarray) -> np.ndarray:
    if p.padded_dim == p.input_dim:
        return block
    pad = np.zeros((p.padded_dim - p.input_dim,) + block.shape[1:])
    return np.concatenate([block, pad], axis=0)


def apply_fast_block(p: TransformPlan, block: np.ndarray) -> np.ndarray:
    """Fast-algorithm transform of each column of ``block``.

    Matches ``apply_naive_block`` to 1e-9 max-abs; zero-pads to
    ``padded_dim`` first where the plan calls for it.
    """
    block = _padded(p, _check_block(p, block))
    tag = p.kind.tag
    if tag == "dct2":
        return scipy.fft.dct(block, type=2, axis=0, norm="ortho")
    if tag == "dst1":
        return scipy.fft.dst(block, type=1, axis=0, norm="ortho")
    if tag == "dht":
        spectrum = np.fft.fft(block, axis=0)
        return (spectrum.real - spectrum.imag) / np.sqrt(p.padded_dim)
    if tag == "fwht_natural":
        return fwht_natural(block)
    if tag == "fwht_sequency":
        return fwht_sequency(block)
    if tag == "random":
        return matrix_for_plan(p) @ block
    return analyze(block, p.kind.bank, p.wavelet_levels)


def apply_naive_block(p: TransformPlan, block: np.ndarray) -> np.ndarray:
    """Reference O(N^2) path: multiply by the dense transform matrix."""
    block = _padded(p, _check_block(p, block))
    return matrix_for_plan(p) @ block


def apply_fast(p: TransformPlan, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise DimensionError("apply_fast expects a vector; use apply_fast_block for matrices")
    return apply_fast_block(p, x)


def apply_naive(p: TransformPlan, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise DimensionError("apply_naive expects a vector; use apply_naive_block for matrices")
    return apply_naive_block(p, x)
