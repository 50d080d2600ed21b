"""LU factorisation with partial pivoting, and a Cholesky-based definiteness test."""

from __future__ import annotations

import numpy as np

__all__ = [
    "LinAlgError",
    "SingularMatrixError",
    "lu_factor",
    "lu_solve",
    "is_positive_definite",
]

PIVOT_RTOL = 1e-13


class LinAlgError(ArithmeticError):
    """Base class for failures in the dense kernels."""


class SingularMatrixError(LinAlgError):
    def __init__(self, index: int, pivot: float):
        super().__init__(f"matrix is numerically singular at pivot {index} (|pivot| = {abs(pivot):.3e})")
        self.index = index
        self.pivot = pivot


def lu_factor(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return packed ``LU`` and the row permutation ``perm`` with ``a[perm] = L @ U``.

    ``L`` is unit lower triangular and stored below the diagonal.
    """
    lu = np.array(a, dtype=float, copy=True)
    n, m = lu.shape
    if n != m:
        raise ValueError(f"lu_factor needs a square matrix, got {lu.shape}")
    perm = np.arange(n)
    scale = np.abs(lu).sum(axis=1).max() if n else 0.0
    floor = PIVOT_RTOL * scale
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if not abs(lu[p, k]) > floor:
            raise SingularMatrixError(k, lu[p, k])
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            perm[[k, p]] = perm[[p, k]]
        lu[k + 1:, k] /= lu[k, k]
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, perm


def _lu_substitute(lu: np.ndarray, perm: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = lu.shape[0]
    y = np.array(b[perm], dtype=float)
    for i in range(1, n):
        y[i] -= lu[i, :i] @ y[:i]
    for i in range(n - 1, -1, -1):
        y[i] -= lu[i, i + 1:] @ y[i + 1:]
        y[i] /= lu[i, i]
    return y


def lu_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve ``a @ x = b`` for a vector or a block of right-hand sides.

    Raises
    ------
    SingularMatrixError
        If a pivot falls below ``1e-13 * ||a||_inf``.
    """
    b = np.asarray(b, dtype=float)
    lu, perm = lu_factor(a)
    if b.shape[0] != lu.shape[0]:
        raise ValueError(f"right-hand side has {b.shape[0]} rows, matrix has {lu.shape[0]}")
    return _lu_substitute(lu, perm, b)


def is_positive_definite(a: np.ndarray) -> bool:
    """Attempt a Cholesky factorisation of the symmetric part of ``a``."""
    c = 0.5 * (np.asarray(a, dtype=float) + np.asarray(a, dtype=float).T)
    n = c.shape[0]
    for k in range(n):
        d = c[k, k]
        if not d > 0.0:
            return False
        c[k, k] = np.sqrt(d)
        c[k + 1:, k] /= c[k, k]
        c[k + 1:, k + 1:] -= np.outer(c[k + 1:, k], c[k + 1:, k])
    return True
