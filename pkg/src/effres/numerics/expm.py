"""Matrix exponential by scaling and squaring with a degree-13 Pade approximant."""

from __future__ import annotations

import math

import numpy as np

from .lu import lu_solve

__all__ = ["expm"]

_PADE13 = (
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
)
# Largest 1-norm for which the [13/13] approximant is accurate to unit roundoff.
_THETA13 = 5.371920351148152


def expm(a: np.ndarray, t: float = 1.0) -> np.ndarray:
    """Return ``exp(t * a)``."""
    if t < 0:
        raise ValueError("expm expects t >= 0; negate the matrix instead")
    m = np.asarray(a, dtype=float) * t
    n = m.shape[0]
    if n == 0:
        return m.copy()
    norm1 = np.abs(m).sum(axis=0).max()
    squarings = 0
    if norm1 > _THETA13:
        squarings = int(math.ceil(math.log2(norm1 / _THETA13)))
        m = m / (2.0 ** squarings)
    b = _PADE13
    eye = np.eye(n)
    m2 = m @ m
    m4 = m2 @ m2
    m6 = m4 @ m2
    u = m @ (m6 @ (b[13] * m6 + b[11] * m4 + b[9] * m2) + b[7] * m6 + b[5] * m4 + b[3] * m2 + b[1] * eye)
    v = m6 @ (b[12] * m6 + b[10] * m4 + b[8] * m2) + b[6] * m6 + b[4] * m4 + b[2] * m2 + b[0] * eye
    r = lu_solve(v - u, v + u)
    for _ in range(squarings):
        r = r @ r
    return r
