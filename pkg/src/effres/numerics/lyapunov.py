"""Solvers for ``A X + X A^T = I`` with ``A`` having spectrum in the open right half-plane."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lu import LinAlgError, SingularMatrixError, is_positive_definite, lu_solve
from .schur import real_schur, schur_blocks, schur_eigenvalues

__all__ = [
    "KRONECKER_MAX_DIM",
    "LyapunovSolution",
    "ResidualError",
    "SpectrumError",
    "solve_lyapunov",
    "lyapunov_residual",
    "METHODS",
]

DEFAULT_TOL = 1e-8
# Coefficient size limit for the vectorised solve (graphs of up to 30 nodes).
KRONECKER_MAX_DIM = 29
METHODS = ("bartels-stewart", "kronecker")


class SpectrumError(LinAlgError):
    """The coefficient has an eigenvalue with non-positive real part."""


class ResidualError(LinAlgError):
    pass


@dataclass(frozen=True)
class LyapunovSolution:
    sigma: np.ndarray
    residual_norm: float


def lyapunov_residual(a: np.ndarray, x: np.ndarray) -> float:
    """Frobenius norm of ``A X + X A^T - I``."""
    r = a @ x + x @ a.T - np.eye(a.shape[0])
    return float(np.sqrt((r * r).sum()))


def _small_sylvester(tii: np.ndarray, tjj: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve ``tii W + W tjj^T = rhs`` for blocks of size at most 2."""
    si, sj = tii.shape[0], tjj.shape[0]
    if si == 1 and sj == 1:
        return rhs / (tii[0, 0] + tjj[0, 0])
    m = np.kron(np.eye(sj), tii) + np.kron(tjj, np.eye(si))
    w = lu_solve(m, rhs.reshape(-1, order="F"))
    return w.reshape((si, sj), order="F")


def _quasi_triangular_lyapunov(t: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Solve ``T Y + Y T^T = C`` for symmetric ``C`` and quasi-upper-triangular ``T``.

    Column blocks are solved right to left. Within a column block only rows
    at or above it are computed; the rest follow from symmetry.
    """
    n = t.shape[0]
    y = np.zeros((n, n))
    blocks = schur_blocks(t)
    for jb in range(len(blocks) - 1, -1, -1):
        cj, sj = blocks[jb]
        ej = cj + sj
        cols = slice(cj, ej)
        tjj = t[cols, cols]
        rhs = c[:, cols] - y[:, ej:] @ t[cols, ej:].T
        w = np.zeros((n, sj))
        w[ej:] = y[cols, ej:].T
        for ib in range(jb, -1, -1):
            ci, si = blocks[ib]
            ei = ci + si
            rows = slice(ci, ei)
            r = rhs[rows] - t[rows, ei:] @ w[ei:]
            w[rows] = _small_sylvester(t[rows, rows], tjj, r)
        y[:, cols] = w
    return y


def _bartels_stewart(a: np.ndarray) -> np.ndarray:
    t, z = real_schur(a)
    eig = schur_eigenvalues(t)
    floor = a.shape[0] * np.finfo(float).eps * max(1.0, np.abs(a).sum())
    if eig.size and eig.real.min() <= floor:
        raise SpectrumError(
            f"eigenvalue {eig[np.argmin(eig.real)]:.3e} is not in the open right half-plane"
        )
    c = z.T @ z
    c = 0.5 * (c + c.T)
    y = _quasi_triangular_lyapunov(t, c)
    return z @ y @ z.T


def _kronecker(a: np.ndarray) -> np.ndarray:
    m = a.shape[0]
    if m > KRONECKER_MAX_DIM:
        raise ValueError(
            f"kronecker solver is limited to {KRONECKER_MAX_DIM}x{KRONECKER_MAX_DIM} coefficients, got {m}"
        )
    eye = np.eye(m)
    big = np.kron(eye, a) + np.kron(a, eye)
    try:
        vec = lu_solve(big, eye.reshape(-1, order="F"))
    except SingularMatrixError as exc:
        raise SpectrumError("Lyapunov operator is singular") from exc
    x = vec.reshape((m, m), order="F")
    # A positive definite solution exists iff the spectrum is in the right half-plane.
    if not is_positive_definite(x):
        raise SpectrumError("solution is not positive definite")
    return x


def solve_lyapunov(
    a: np.ndarray, method: str = "bartels-stewart", tol: float = DEFAULT_TOL
) -> LyapunovSolution:
    """Solve ``A S + S A^T = I`` and check the residual.

    Parameters
    ----------
    a
        Square coefficient whose eigenvalues all have positive real part.
    method
        ``"bartels-stewart"`` (Schur based, any size) or ``"kronecker"``
        (dense vectorised system, at most 29x29).
    tol
        Accept when ``||A S + S A^T - I||_F <= tol * (1 + ||A||_F ||S||_F)``.

    Raises
    ------
    SpectrumError
        The spectrum condition fails.
    ResidualError
        The residual test fails.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"coefficient must be square, got shape {a.shape}")
    if method == "bartels-stewart":
        x = _bartels_stewart(a)
    elif method == "kronecker":
        x = _kronecker(a)
    else:
        raise ValueError(f"unknown Lyapunov method {method!r}; expected one of {METHODS}")
    x = 0.5 * (x + x.T)
    res = lyapunov_residual(a, x)
    bound = tol * (1.0 + np.linalg.norm(a) * np.linalg.norm(x))
    if not res <= bound:
        raise ResidualError(f"Lyapunov residual {res:.3e} exceeds {bound:.3e}")
    return LyapunovSolution(x, res)
