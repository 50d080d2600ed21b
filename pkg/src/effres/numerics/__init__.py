"""Dense real kernels: LU, Householder bases, Schur form, Lyapunov solvers, expm."""

from .expm import expm
from .lu import LinAlgError, SingularMatrixError, is_positive_definite, lu_factor, lu_solve
from .lyapunov import (
    KRONECKER_MAX_DIM,
    METHODS,
    LyapunovSolution,
    ResidualError,
    SpectrumError,
    lyapunov_residual,
    solve_lyapunov,
)
from .qbasis import QBasis, build_q, centering_projector, householder, pseudo_inverse_sym
from .schur import ConvergenceError, hessenberg, real_schur, schur_blocks, schur_eigenvalues

__all__ = [
    "ConvergenceError",
    "KRONECKER_MAX_DIM",
    "LinAlgError",
    "LyapunovSolution",
    "METHODS",
    "QBasis",
    "ResidualError",
    "SingularMatrixError",
    "SpectrumError",
    "build_q",
    "centering_projector",
    "expm",
    "hessenberg",
    "householder",
    "is_positive_definite",
    "lu_factor",
    "lu_solve",
    "lyapunov_residual",
    "pseudo_inverse_sym",
    "real_schur",
    "schur_blocks",
    "schur_eigenvalues",
    "solve_lyapunov",
]
