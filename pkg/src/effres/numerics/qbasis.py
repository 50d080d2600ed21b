"""Orthonormal bases for the complement of the all-ones vector."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lu import lu_solve

__all__ = ["QBasis", "build_q", "householder", "pseudo_inverse_sym", "centering_projector"]


@dataclass(frozen=True)
class QBasis:
    """``(n - 1) x n`` matrix whose rows are an orthonormal basis of ``1``-perp."""

    q: np.ndarray

    @property
    def n(self) -> int:
        return self.q.shape[1]

    def reduce(self, m: np.ndarray) -> np.ndarray:
        """``Q M Q^T``."""
        return self.q @ m @ self.q.T

    def lift(self, m: np.ndarray) -> np.ndarray:
        """``Q^T M Q``."""
        return self.q.T @ m @ self.q


def centering_projector(n: int) -> np.ndarray:
    """``I - 11^T / n``."""
    return np.eye(n) - np.full((n, n), 1.0 / n)


def householder(x: np.ndarray) -> tuple[np.ndarray, float]:
    """Reflector ``I - beta v v^T`` sending ``x`` to a multiple of ``e1``.

    Returns ``beta = 0`` when ``x`` is already zero.
    """
    x = np.asarray(x, dtype=float)
    norm = np.sqrt(x @ x)
    v = x.copy()
    if norm == 0.0:
        return v, 0.0
    alpha = -norm if x[0] >= 0 else norm
    v[0] -= alpha
    vv = v @ v
    if vv == 0.0:
        return v, 0.0
    return v, 2.0 / vv


def build_q(n: int, variant: str = "deterministic", seed: int | None = None) -> QBasis:
    """Construct an orthonormal basis of the vectors summing to zero.

    Parameters
    ----------
    n
        Ambient dimension, at least 2.
    variant
        ``"deterministic"`` takes rows 2..n of the Householder reflector that
        maps ``1/sqrt(n)`` to ``e1``. ``"random"`` orthonormalises seeded
        Gaussian vectors against ``1`` with twice-repeated modified
        Gram-Schmidt.
    seed
        Seed for the random variant.
    """
    if n < 2:
        raise ValueError(f"a Q basis needs n >= 2, got {n}")
    if variant == "deterministic":
        u = np.full(n, 1.0 / np.sqrt(n))
        v = u.copy()
        # u[0] > 0 so v[0] = u[0] - 1 never cancels to zero for n >= 2.
        v[0] -= 1.0
        h = np.eye(n) - (2.0 / (v @ v)) * np.outer(v, v)
        return QBasis(h[1:].copy())
    if variant in ("random", "seeded-random"):
        rng = np.random.default_rng(seed)
        basis = [np.full(n, 1.0 / np.sqrt(n))]
        while len(basis) < n:
            w = rng.standard_normal(n)
            for _ in range(2):
                for b in basis:
                    w -= (b @ w) * b
            norm = np.sqrt(w @ w)
            if norm < 1e-8:
                continue
            basis.append(w / norm)
        return QBasis(np.array(basis[1:]))
    raise ValueError(f"unknown Q variant {variant!r}")


def pseudo_inverse_sym(lap: np.ndarray, q: QBasis | None = None) -> np.ndarray:
    """``Q^T (Q L Q^T)^{-1} Q`` for a symmetric Laplacian with kernel ``span{1}``.

    Raises
    ------
    ValueError
        If ``lap`` is not symmetric or its rows do not sum to zero.
    SingularMatrixError
        If the reduced matrix is singular, i.e. the kernel is larger than ``span{1}``.
    """
    lap = np.asarray(lap, dtype=float)
    n = lap.shape[0]
    scale = max(1.0, np.abs(lap).max())
    if not np.allclose(lap, lap.T, rtol=0.0, atol=1e-12 * scale):
        raise ValueError("pseudo_inverse_sym needs a symmetric matrix")
    if np.abs(lap.sum(axis=1)).max() > 1e-10 * scale:
        raise ValueError("rows must sum to zero")
    if q is None:
        q = build_q(n)
    x = q.q.T @ lu_solve(q.reduce(lap), q.q)
    return 0.5 * (x + x.T)
