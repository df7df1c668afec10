"""
Blocking matrices for a generalized sidelobe canceller.

A blocking row ``w`` must satisfy ``w^T a(theta_l) = 0`` for every blocked
direction, i.e. the polynomial with coefficients ``w`` must vanish at
``alpha(theta_l)``.  The rows are therefore elements of the ideal generated by
``prod_l (x - alpha(theta_l))``; the Toeplitz basis of that ideal gives the
maximal set of ``M - L`` independent rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .array_model import ArrayGeometry, root_of_direction, steering_matrix
from .errors import DimensionError, DomainError
from .polyideal import Variety, ideal_basis

__all__ = ["BlockingMatrix", "BlockingReport", "blocking_matrix", "verify_blocking"]


@dataclass(frozen=True)
class BlockingMatrix:
    """Rows of ``W_B`` (shape (M - L, M)) annihilate every blocked steering vector."""

    W_B: np.ndarray
    blocked: Variety
    M: int

    def __post_init__(self):
        W = np.array(self.W_B, dtype=complex)
        if W.ndim != 2 or W.shape[1] != self.M:
            raise DimensionError(f"W_B must have {self.M} columns, got shape {W.shape}")
        if W.shape[0] == 0 or np.linalg.matrix_rank(W) < W.shape[0]:
            raise DomainError("blocking rows must be linearly independent")
        V = self.blocked.roots[None, :] ** np.arange(self.M)[:, None]
        resid = np.max(np.abs(W @ V))
        if resid > 1e-10 * self.M:
            raise DomainError(f"rows do not block the given directions (residual {resid:.2e})")
        W.setflags(write=False)
        object.__setattr__(self, "W_B", W)

    @property
    def L(self) -> int:
        return len(self.blocked)


def blocking_matrix(
    M: int,
    directions: Sequence[float],
    geom: ArrayGeometry,
    orthonormalize: bool = False,
) -> BlockingMatrix:
    """Blocking matrix for ``directions`` (degrees) on an ``M``-sensor array.

    With ``orthonormalize`` the rows are replaced by an orthonormal basis of the
    same row space (still annihilating every blocked direction).
    """
    if M != geom.N:
        raise DimensionError(f"M={M} does not match the array size {geom.N}")
    directions = np.atleast_1d(np.asarray(directions, dtype=float))
    if directions.size >= M:
        raise DimensionError(f"cannot block {directions.size} directions with {M} sensors")
    blocked = Variety(np.atleast_1d(root_of_direction(geom, directions)))
    Q = ideal_basis(blocked, M).Q
    if orthonormalize:
        Q, _ = np.linalg.qr(Q)
    return BlockingMatrix(W_B=Q.T, blocked=blocked, M=M)


@dataclass(frozen=True)
class BlockingReport:
    directions: np.ndarray
    residuals: np.ndarray  # max_m |(W_B a(theta))_m| per direction

    def blocked(self, tol: float) -> np.ndarray:
        return self.residuals <= tol


def verify_blocking(W_B: BlockingMatrix, signal_dirs, geom: ArrayGeometry) -> BlockingReport:
    dirs = np.atleast_1d(np.asarray(signal_dirs, dtype=float))
    A = steering_matrix(geom, dirs)
    res = np.max(np.abs(W_B.W_B @ A), axis=0)
    return BlockingReport(directions=dirs, residuals=res)
