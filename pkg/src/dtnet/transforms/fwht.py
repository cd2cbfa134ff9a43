"""Fast Walsh-Hadamard transform, natural (Sylvester) and sequency order."""
from __future__ import annotations

import numpy as np


def fwht_natural(block: np.ndarray) -> np.ndarray:
    """In-place-style butterfly FWHT along axis 0, scaled by 1/sqrt(n).

    ``block`` must have a power-of-two number of rows. Columns are
    independent signals. Returns a new array in natural Hadamard order,
    i.e. row k of the Sylvester matrix H_n / sqrt(n).
    """
    x = np.array(block, dtype=np.float64, copy=True)
    n = x.shape[0]
    if n & (n - 1):
        raise ValueError(f"FWHT length must be a power of two, got {n}")
    h = 1
    while h < n:
        # butterflies on interleaved blocks of height 2h
        y = x.reshape(n // (2 * h), 2, h, *x.shape[1:])
        a = y[:, 0].copy()
        b = y[:, 1].copy()
        y[:, 0] = a + b
        y[:, 1] = a - b
        h *= 2
    return x / np.sqrt(n)


def sequency_permutation(n: int) -> np.ndarray:
    """Indices mapping sequency position s to the natural Hadamard row.

    Row ``perm[s]`` of the natural-order matrix has exactly s sign changes:
    the natural index is the bit-reversed Gray code of s.
    """
    if n & (n - 1):
        raise ValueError(f"sequency order needs a power of two, got {n}")
    bits = n.bit_length() - 1
    s = np.arange(n, dtype=np.uint64)
    gray = s ^ (s >> np.uint64(1))
    perm = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        perm |= (((gray >> np.uint64(b)) & np.uint64(1)) << (bits - 1 - b)).astype(np.int64)
    return perm


def fwht_sequency(block: np.ndarray) -> np.ndarray:
    """FWHT with rows reordered by ascending sign-change count."""
    out = fwht_natural(block)
    return out[sequency_permutation(out.shape[0])]
