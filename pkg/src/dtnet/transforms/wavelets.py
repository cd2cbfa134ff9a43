"""Multilevel two-channel filter bank with circular boundary handling.

One analysis level maps a length-m block to ceil(m/2) approximation rows
followed by floor(m/2) detail rows, gathering input circularly:

    a[k] = sum_n dec_lo[n] * x[(2k + n) % m]
    d[k] = sum_n dec_hi[n] * x[(2k + ph + n) % m],  ph = m % 2

The odd-phase detail grid at odd m keeps the coefficient count exactly m at
every level. A full decomposition applies this to the running approximation
block ``levels`` times; the output stacks the final approximation first,
then details from coarsest to finest. Reconstruction is exact whenever
every level length is even (power-of-two inputs); odd intermediate lengths
cannot be critically resampled by a two-channel FIR bank and are rejected
by the synthesis path.
"""
from __future__ import annotations

import numpy as np

from ..errors import DimensionError
from .filters import FilterBank


def _gather(ext: np.ndarray, offset: int, count: int, taps: np.ndarray) -> np.ndarray:
    if ext.ndim == 1:
        filtered = np.correlate(ext, taps, mode="valid")
        return filtered[offset: offset + 2 * count: 2].astype(np.float64, copy=False)
    # one strided multiply-add per tap, vectorized across the columns
    out = np.zeros((count,) + ext.shape[1:], dtype=np.float64)
    for n, t in enumerate(taps):
        out += t * ext[offset + n: offset + n + 2 * count: 2]
    return out


def _extend_circular(block: np.ndarray, extra: int) -> np.ndarray:
    m = block.shape[0]
    reps = -(-extra // m)  # ceil; > 1 only when the filter out-wraps the block
    return np.concatenate([block] * (1 + reps), axis=0)[: m + extra]


def analyze_level(block: np.ndarray, bank: FilterBank) -> tuple[np.ndarray, np.ndarray]:
    """Split one block (rows = signal, columns = samples) into (a, d)."""
    m = block.shape[0]
    ca, cd = (m + 1) // 2, m // 2
    ext = _extend_circular(block, bank.length + 2)
    a = _gather(ext, 0, ca, bank.dec_lo)
    d = _gather(ext, m % 2, cd, bank.dec_hi)
    return a, d


def analyze(block: np.ndarray, bank: FilterBank, levels: int) -> np.ndarray:
    """Full decomposition: [a_L, d_L, d_{L-1}, ..., d_1] stacked on axis 0."""
    details = []
    a = np.asarray(block, dtype=np.float64)
    for _ in range(levels):
        a, d = analyze_level(a, bank)
        details.append(d)
    return np.concatenate([a] + details[::-1], axis=0)


def _scatter(coeffs: np.ndarray, phase: int, m: int, taps: np.ndarray) -> np.ndarray:
    out = np.zeros((m + taps.shape[0] + 2,) + coeffs.shape[1:], dtype=np.float64)
    for n, t in enumerate(taps):
        out[phase + n: phase + n + 2 * coeffs.shape[0]: 2] += t * coeffs
    folded = out[:m]
    for start in range(m, out.shape[0], m):
        chunk = out[start: start + m]
        folded[: chunk.shape[0]] += chunk
    return folded


def synthesize_level(a: np.ndarray, d: np.ndarray, bank: FilterBank) -> np.ndarray:
    """Invert one even-length analysis level through the synthesis filters."""
    m = a.shape[0] + d.shape[0]
    if m % 2:
        raise DimensionError("synthesis requires an even block length")
    lo, hi = (bank.dec_lo, bank.dec_hi) if bank.orthogonal else (bank.rec_lo, bank.rec_hi)
    return _scatter(a, 0, m, lo) + _scatter(d, 0, m, hi)


def synthesize(coeffs: np.ndarray, bank: FilterBank, levels: int, length: int) -> np.ndarray:
    """Invert a full decomposition of an even-at-every-level length."""
    sizes = level_sizes(length, levels)
    a = coeffs[: sizes[-1][0]]
    pos = sizes[-1][0]
    for ca, cd in reversed(sizes):
        d = coeffs[pos: pos + cd]
        pos += cd
        a = synthesize_level(a, d, bank)
    return a


def level_sizes(length: int, levels: int) -> list[tuple[int, int]]:
    """(approx, detail) row counts per level, finest to coarsest."""
    sizes = []
    m = length
    for _ in range(levels):
        sizes.append(((m + 1) // 2, m // 2))
        m = (m + 1) // 2
    return sizes


def level_matrix(m: int, bank: FilterBank, synthesis: bool = False) -> np.ndarray:
    """Dense m-by-m matrix of one analysis (or synthesis-pattern) level.

    Built tap by tap from the definition; serves as the reference the fast
    path is checked against.
    """
    lo, hi = (bank.dec_lo, bank.dec_hi)
    if synthesis and not bank.orthogonal:
        lo, hi = (bank.rec_lo, bank.rec_hi)
    ca, cd = (m + 1) // 2, m // 2
    mat = np.zeros((m, m))
    for k in range(ca):
        for n, t in enumerate(lo):
            mat[k, (2 * k + n) % m] += t
    ph = m % 2
    for k in range(cd):
        for n, t in enumerate(hi):
            mat[ca + k, (2 * k + ph + n) % m] += t
    return mat


def analysis_matrix(length: int, bank: FilterBank, levels: int) -> np.ndarray:
    """Dense matrix of the full decomposition, composed level by level."""
    mat = np.eye(length)
    m = length
    for _ in range(levels):
        mat[:m] = level_matrix(m, bank) @ mat[:m]
        m = (m + 1) // 2
    # blocks now sit as [a_L, d_L, ..., d_1] already: each level rewrites
    # the leading approximation rows in place, leaving details below
    return mat
