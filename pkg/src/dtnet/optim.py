"""Convex solvers for the per-layer output matrices.

Layer 0 uses closed-form ridge regression. Later layers solve a
least-squares problem over a Frobenius ball,

    min_O  sum_j || t_j - O y_j ||^2   s.t.  ||O||_F^2 <= epsilon,

with a fixed-iteration ADMM splitting: the quadratic term keeps a cached
factorization (the data matrix never changes between iterations), the ball
constraint is handled by projection, and a scaled dual variable couples the
two. A final projection guarantees feasibility regardless of where the
iterate stopped.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionError, NumericError


@dataclass(frozen=True)
class AdmmConfig:
    """Penalty, iteration budget, and squared ball radius for one solve."""

    mu: float
    k_max: int
    epsilon: float

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError(f"mu must be positive, got {self.mu}")
        if self.k_max < 1:
            raise ValueError(f"k_max must be >= 1, got {self.k_max}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")


def _as_data(name: str, M: np.ndarray) -> np.ndarray:
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2:
        raise DimensionError(f"{name} must be a 2-D matrix")
    if not np.all(np.isfinite(M)):
        raise NumericError(f"non-finite values in {name}")
    return M


def _check_pair(Y: np.ndarray, T: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    Y = _as_data("Y", Y)
    T = _as_data("T", T)
    if Y.shape[1] != T.shape[1]:
        raise DimensionError(
            f"sample counts differ: Y has {Y.shape[1]} columns, T has {T.shape[1]}")
    return Y, T


def ridge_solve(Y: np.ndarray, T: np.ndarray, lambda0: float) -> np.ndarray:
    """Minimize ||T - O Y||_F^2 + lambda0 ||O||_F^2 for O.

    Solved through a Cholesky factorization of Y Y' + lambda0 I; falls back
    to the minimum-norm least-squares solution when lambda0 = 0 leaves the
    Gram matrix singular.
    """
    Y, T = _check_pair(Y, T)
    if lambda0 < 0:
        raise ValueError(f"lambda0 must be non-negative, got {lambda0}")
    n = Y.shape[0]
    gram = Y @ Y.T + lambda0 * np.eye(n)
    rhs = Y @ T.T
    try:
        factor = scipy.linalg.cho_factor(gram)
        return scipy.linalg.cho_solve(factor, rhs).T
    except np.linalg.LinAlgError:
        pass
    sol, *_ = np.linalg.lstsq(Y.T, T.T, rcond=None)
    return sol.T


def project_frobenius_ball(M: np.ndarray, epsilon: float) -> np.ndarray:
    """Nearest matrix with squared Frobenius norm at most ``epsilon``."""
    M = _as_data("M", M)
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    sq = float(np.sum(M * M))
    if sq <= epsilon:
        return M
    return M * np.sqrt(epsilon / sq)


def training_cost(O: np.ndarray, Y: np.ndarray, T: np.ndarray) -> float:
    """Mean squared prediction error over samples: ||T - O Y||_F^2 / J."""
    Y, T = _check_pair(Y, T)
    O = _as_data("O", O)
    if O.shape != (T.shape[0], Y.shape[0]):
        raise DimensionError(
            f"O has shape {O.shape}, expected {(T.shape[0], Y.shape[0])}")
    resid = T - O @ Y
    return float(np.sum(resid * resid)) / Y.shape[1]


def admm_constrained_ls(Y: np.ndarray, T: np.ndarray, cfg: AdmmConfig) -> np.ndarray:
    """Ball-constrained least squares via ADMM, run for exactly k_max steps.

    Splitting: O carries the quadratic term, Z the ball constraint, L the
    scaled dual. All three start at zero, which is feasible and keeps runs
    bit-reproducible. The O-update solves

        O (2 Y Y' + mu I) = 2 T Y' + mu (Z - L)

    against a factorization computed once.
    """
    Y, T = _check_pair(Y, T)
    n = Y.shape[0]
    gram = 2.0 * (Y @ Y.T) + cfg.mu * np.eye(n)
    factor = scipy.linalg.cho_factor(gram)
    data_term = 2.0 * (T @ Y.T)
    O = np.zeros((T.shape[0], n))
    Z = np.zeros_like(O)
    L = np.zeros_like(O)
    for k in range(cfg.k_max):
        O = scipy.linalg.cho_solve(factor, (data_term + cfg.mu * (Z - L)).T).T
        if not np.all(np.isfinite(O)):
            raise NumericError(f"ADMM diverged at iteration {k}")
        Z = project_frobenius_ball(O + L, cfg.epsilon)
        L = L + O - Z
    return project_frobenius_ball(O, cfg.epsilon)
