# randpca/linalg/nystrom.py

"""
Nystrom factorization of nonnegative-definite self-adjoint matrices.

B1 = A Q, B2 = Q^H B1, and the Cholesky factor of B2 is replaced by
the self-adjoint square root C (C^2 = B2), so rank-deficient or slightly
indefinite B2 no longer breaks the factorization. F = B1 C^+ is formed
with a regularized pseudoinverse and A ~ F F^H = U diag(S^2) U^H.
"""

from typing import Optional

import numpy as np
from scipy.linalg import eigh, pinvh, svd

from randpca.core.config import settings
from randpca.core.exceptions import DomainError, ShapeError
from randpca.core.logging_config import logger
from randpca.core.models import EigenApprox, NystromIntermediate, SketchConfig
from randpca.linalg.drivers import check_selfadjoint
from randpca.linalg.matop import OperatorLike, aslinearoperator
from randpca.linalg.rangefinder import find_range


def selfadjoint_sqrt(B2: np.ndarray, neg_tol: Optional[float] = None) -> np.ndarray:
    """
    Self-adjoint C with C^2 = B2, from the eigendecomposition of B2.
    Eigenvalues slightly below zero (roundoff) are clamped to 0.

    Args:
    - B2 (np.ndarray): l x l self-adjoint block.
    - neg_tol (float): relative threshold separating roundoff from a
      genuinely indefinite input; defaults to settings.NEGATIVE_EIG_TOL.

    Raises:
    - ShapeError: B2 is not square.
    - DomainError: B2 has an eigenvalue below -neg_tol * ||B2||.
    """
    if neg_tol is None:
        neg_tol = settings.NEGATIVE_EIG_TOL
    B2 = np.asarray(B2, dtype=np.float64)
    if B2.ndim != 2 or B2.shape[0] != B2.shape[1]:
        raise ShapeError(f"square root needs a square block, got {B2.shape}")

    d, W = eigh((B2 + B2.T) / 2)
    scale = np.abs(d).max() if d.size else 0.0
    if d.size and d.min() < -neg_tol * scale:
        raise DomainError(
            f"block is not nonnegative definite (eigenvalue {d.min():.3e}, "
            f"norm {scale:.3e})"
        )
    C = (W * np.sqrt(np.clip(d, 0.0, None))) @ W.T
    return (C + C.T) / 2


def stable_solve_right(
    B1: np.ndarray, C: np.ndarray, cutoff: Optional[float] = None
) -> np.ndarray:
    """
    F = B1 C^+, where C^+ drops the eigenvalues of C below
    cutoff * ||C|| (default settings.PINV_CUTOFF).
    """
    if cutoff is None:
        cutoff = settings.PINV_CUTOFF
    if B1.shape[1] != C.shape[0]:
        raise ShapeError(f"cannot solve {B1.shape} against {C.shape}")
    return B1 @ pinvh(C, atol=0.0, rtol=cutoff)


def nystrom_intermediate(op: OperatorLike, cfg: SketchConfig) -> NystromIntermediate:
    """
    Runs the self-adjoint range finder and forms B1, B2, C, F and the SVD
    of F. The input is checked for self-adjointness and definiteness.
    """
    op = aslinearoperator(op)
    cfg.check_shape(*op.shape)
    check_selfadjoint(op, cfg.seed, definite=True)

    Q = find_range(op, cfg, mode="self-adjoint").Q
    B1 = op.apply(Q)
    B2 = Q.T @ B1
    B2 = (B2 + B2.T) / 2
    C = selfadjoint_sqrt(B2)
    F = stable_solve_right(B1, C)
    U, S, _ = svd(F, full_matrices=False)
    logger.debug(f"nystrom on {op!r}: l={Q.shape[1]}, leading S^2={S[:1] ** 2}")
    return NystromIntermediate(Q=Q, B1=B1, B2=B2, C=C, F=F, U=U, S=S)


def nystrom(op: OperatorLike, cfg: SketchConfig) -> EigenApprox:
    """
    Nystrom approximation A ~ U diag(lam) U^H with lam = S^2 >= 0.

    Raises:
    - DomainError: the self-adjointness or definiteness check failed, or
      Q^H A Q is clearly indefinite.
    """
    parts = nystrom_intermediate(op, cfg)
    k = cfg.k
    return EigenApprox(U=parts.U[:, :k], lam=parts.S[:k] ** 2)
