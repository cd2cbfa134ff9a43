"""Dense transform matrices built directly from their definitions.

These are the ground-truth reference for the fast kernels and the baseline
for the benchmark subcommand. Every builder writes entries from the textbook
formula (or filter taps), never by calling the fast path.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .kinds import TransformKind, TransformPlan, plan as make_plan
from .wavelets import analysis_matrix


def dct2_matrix(n: int) -> np.ndarray:
    """Orthonormal DCT-II basis: rows are cosines at half-sample phase."""
    k = np.arange(n)[:, None]
    j = np.arange(n)[None, :]
    mat = np.cos(np.pi * (2 * j + 1) * k / (2 * n))
    mat *= np.sqrt(2.0 / n)
    mat[0] *= np.sqrt(0.5)
    return mat


def dst1_matrix(n: int) -> np.ndarray:
    """Orthonormal DST-I basis (symmetric, self-inverse)."""
    k = np.arange(1, n + 1)[:, None]
    j = np.arange(1, n + 1)[None, :]
    return np.sqrt(2.0 / (n + 1)) * np.sin(np.pi * k * j / (n + 1))


def dht_matrix(n: int) -> np.ndarray:
    """Hartley cas basis with 1/sqrt(n) scaling, an involution."""
    k = np.arange(n)[:, None]
    j = np.arange(n)[None, :]
    ang = 2 * np.pi * k * j / n
    return (np.cos(ang) + np.sin(ang)) / np.sqrt(n)


def hadamard_natural_matrix(n: int) -> np.ndarray:
    """Sylvester-ordered Hadamard matrix scaled by 1/sqrt(n)."""
    if n & (n - 1):
        raise ValueError(f"Hadamard size must be a power of two, got {n}")
    mat = np.ones((1, 1))
    while mat.shape[0] < n:
        mat = np.block([[mat, mat], [mat, -mat]])
    return mat / np.sqrt(n)


def sign_changes(rows: np.ndarray) -> np.ndarray:
    """Sign-change count per row, the sequency of a Walsh function."""
    signs = np.sign(rows)
    return np.sum(signs[:, 1:] != signs[:, :-1], axis=1)


def hadamard_sequency_matrix(n: int) -> np.ndarray:
    """Hadamard rows sorted by ascending sign-change count."""
    nat = hadamard_natural_matrix(n)
    order = np.argsort(sign_changes(nat), kind="stable")
    return nat[order]


def random_matrix(seed: int, n: int) -> np.ndarray:
    """Seeded Gaussian matrix, i.i.d. N(0, 1/n), from a Philox stream."""
    rng = np.random.Generator(np.random.Philox(seed))
    return rng.standard_normal((n, n)) / np.sqrt(n)


@lru_cache(maxsize=8)
def _cached_matrix(kind: TransformKind, input_dim: int) -> np.ndarray:
    p = make_plan(kind, input_dim)
    tag = kind.tag
    if tag == "dct2":
        mat = dct2_matrix(p.padded_dim)
    elif tag == "dst1":
        mat = dst1_matrix(p.padded_dim)
    elif tag == "dht":
        mat = dht_matrix(p.padded_dim)
    elif tag == "fwht_natural":
        mat = hadamard_natural_matrix(p.padded_dim)
    elif tag == "fwht_sequency":
        mat = hadamard_sequency_matrix(p.padded_dim)
    elif tag == "random":
        mat = random_matrix(kind.seed, p.padded_dim)
    else:
        mat = analysis_matrix(p.padded_dim, kind.bank, p.wavelet_levels)
    mat.setflags(write=False)
    return mat


def transform_matrix(kind: TransformKind, n: int) -> np.ndarray:
    """Dense output_dim-by-padded_dim matrix of ``kind`` at input size ``n``.

    Deterministic, including the seeded random baseline. The returned array
    is a cached read-only view; copy before mutating.
    """
    return _cached_matrix(kind, int(n))


def matrix_for_plan(p: TransformPlan) -> np.ndarray:
    return _cached_matrix(p.kind, p.input_dim)
