"""Hessenberg reduction and the real Schur form by implicit double-shift QR."""

from __future__ import annotations

import numpy as np

from .lu import LinAlgError
from .qbasis import householder

__all__ = [
    "ConvergenceError",
    "hessenberg",
    "real_schur",
    "schur_blocks",
    "schur_eigenvalues",
]

EPS = np.finfo(float).eps
ITERS_PER_EIGENVALUE = 30


class ConvergenceError(LinAlgError):
    pass


def hessenberg(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(H, U)`` with ``a = U H U^T``, ``H`` upper Hessenberg, ``U`` orthogonal."""
    h = np.array(a, dtype=float, copy=True)
    n = h.shape[0]
    if h.shape != (n, n):
        raise ValueError(f"hessenberg needs a square matrix, got {h.shape}")
    u = np.eye(n)
    for k in range(n - 2):
        v, beta = householder(h[k + 1:, k])
        if beta == 0.0:
            continue
        h[k + 1:, k:] -= beta * np.outer(v, v @ h[k + 1:, k:])
        h[:, k + 1:] -= beta * np.outer(h[:, k + 1:] @ v, v)
        u[:, k + 1:] -= beta * np.outer(u[:, k + 1:] @ v, v)
        h[k + 2:, k] = 0.0
    return h, u


def _rotate(h: np.ndarray, z: np.ndarray, p: int, c: float, s: float) -> None:
    """Similarity by the plane rotation ``[[c, -s], [s, c]]`` on indices ``p, p+1``."""
    g = np.array([[c, -s], [s, c]])
    h[p:p + 2, p:] = g.T @ h[p:p + 2, p:]
    h[:p + 2, p:p + 2] = h[:p + 2, p:p + 2] @ g
    z[:, p:p + 2] = z[:, p:p + 2] @ g


def _standardize(h: np.ndarray, z: np.ndarray, p: int) -> None:
    """Split a deflated 2x2 block at ``p`` if its eigenvalues are real."""
    a, b = h[p, p], h[p, p + 1]
    c, d = h[p + 1, p], h[p + 1, p + 1]
    if c == 0.0:
        return
    half = 0.5 * (a - d)
    disc = half * half + b * c
    if disc < 0.0:
        return
    root = np.sqrt(disc)
    lam = 0.5 * (a + d) + (root if half >= 0 else -root)
    # Two candidate eigenvectors for lam; keep the better scaled one.
    v1 = np.array([b, lam - a])
    v2 = np.array([lam - d, c])
    v = v1 if v1 @ v1 >= v2 @ v2 else v2
    norm = np.sqrt(v @ v)
    if norm == 0.0:
        return
    _rotate(h, z, p, v[0] / norm, v[1] / norm)
    h[p + 1, p] = 0.0


def _reflect_left(h: np.ndarray, rows: slice, cols: slice, v: np.ndarray, beta: float) -> None:
    h[rows, cols] -= beta * np.outer(v, v @ h[rows, cols])


def _reflect_right(h: np.ndarray, rows: slice, cols: slice, v: np.ndarray, beta: float) -> None:
    h[rows, cols] -= beta * np.outer(h[rows, cols] @ v, v)


def real_schur(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Real Schur decomposition ``a = Z T Z^T``.

    ``T`` is quasi-upper-triangular: 1x1 blocks for real eigenvalues and
    2x2 blocks for complex conjugate pairs. Francis double-shift sweeps run
    on the active window with full-matrix updates so the whole of ``T`` is
    produced; every tenth stagnant iteration uses an exceptional shift.

    Raises
    ------
    ConvergenceError
        When one eigenvalue takes more than ``30 * n`` iterations.
    """
    h, z = hessenberg(a)
    n = h.shape[0]
    if n == 0:
        return h, z
    anorm = np.abs(h).sum()
    max_iter = ITERS_PER_EIGENVALUE * max(n, 1)
    hi = n - 1
    its = 0
    while hi >= 0:
        # Locate the top of the unreduced block ending at hi.
        lo = hi
        while lo > 0:
            s = abs(h[lo - 1, lo - 1]) + abs(h[lo, lo])
            if s == 0.0:
                s = anorm
            if abs(h[lo, lo - 1]) <= EPS * s:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1

        if lo == hi:
            hi -= 1
            its = 0
            continue
        if lo == hi - 1:
            _standardize(h, z, hi - 1)
            hi -= 2
            its = 0
            continue
        if its >= max_iter:
            raise ConvergenceError(f"QR iteration did not converge for eigenvalue {hi}")
        its += 1

        if its % 10 == 0:
            s = abs(h[hi, hi - 1]) + abs(h[hi - 1, hi - 2])
            h11 = 0.75 * s + h[hi, hi]
            trace = 2.0 * h11
            det = h11 * h11 + 0.4375 * s * s
        else:
            trace = h[hi - 1, hi - 1] + h[hi, hi]
            det = h[hi - 1, hi - 1] * h[hi, hi] - h[hi - 1, hi] * h[hi, hi - 1]

        x = h[lo, lo] * h[lo, lo] + h[lo, lo + 1] * h[lo + 1, lo] - trace * h[lo, lo] + det
        y = h[lo + 1, lo] * (h[lo, lo] + h[lo + 1, lo + 1] - trace)
        w = h[lo + 1, lo] * h[lo + 2, lo + 1]
        for k in range(lo, hi - 1):
            v, beta = householder(np.array([x, y, w]))
            if beta != 0.0:
                r = max(lo, k - 1)
                _reflect_left(h, slice(k, k + 3), slice(r, n), v, beta)
                top = min(k + 3, hi)
                _reflect_right(h, slice(0, top + 1), slice(k, k + 3), v, beta)
                _reflect_right(z, slice(None), slice(k, k + 3), v, beta)
                if k > lo:
                    h[k + 1:k + 3, k - 1] = 0.0
            x = h[k + 1, k]
            y = h[k + 2, k]
            if k < hi - 2:
                w = h[k + 3, k]
        v, beta = householder(np.array([x, y]))
        if beta != 0.0:
            _reflect_left(h, slice(hi - 1, hi + 1), slice(hi - 2, n), v, beta)
            _reflect_right(h, slice(0, hi + 1), slice(hi - 1, hi + 1), v, beta)
            _reflect_right(z, slice(None), slice(hi - 1, hi + 1), v, beta)
            h[hi, hi - 2] = 0.0

    # Clear roundoff below the quasi-triangular structure.
    for i in range(2, n):
        h[i, :i - 1] = 0.0
    return h, z


def schur_blocks(t: np.ndarray) -> list[tuple[int, int]]:
    """``(start, size)`` of each diagonal block of a quasi-triangular matrix."""
    n = t.shape[0]
    blocks = []
    i = 0
    while i < n:
        if i + 1 < n and t[i + 1, i] != 0.0:
            blocks.append((i, 2))
            i += 2
        else:
            blocks.append((i, 1))
            i += 1
    return blocks


def schur_eigenvalues(t: np.ndarray) -> np.ndarray:
    """Eigenvalues read off the diagonal blocks, as a complex array."""
    out = []
    for start, size in schur_blocks(t):
        if size == 1:
            out.append(complex(t[start, start]))
            continue
        a, b = t[start, start], t[start, start + 1]
        c, d = t[start + 1, start], t[start + 1, start + 1]
        half = 0.5 * (a - d)
        disc = half * half + b * c
        mid = 0.5 * (a + d)
        if disc >= 0:
            r = np.sqrt(disc)
            out.extend([complex(mid + r), complex(mid - r)])
        else:
            r = np.sqrt(-disc)
            out.extend([complex(mid, r), complex(mid, -r)])
    return np.array(out, dtype=complex)
