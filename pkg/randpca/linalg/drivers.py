# randpca/linalg/drivers.py

"""
Low-rank factorizations assembled from a range basis: randomized SVD,
PCA with implicit centering, and eigendecomposition of self-adjoint
matrices.
"""

import numpy as np
from scipy.linalg import eigh, svd

from randpca.core.config import settings
from randpca.core.exceptions import DomainError
from randpca.core.logging_config import logger
from randpca.core.models import EigenApprox, LowRankSVD, SketchConfig
from randpca.core.rng import child_seed
from randpca.linalg.matop import (
    CenteredOperator,
    LinearOperator,
    OperatorLike,
    aslinearoperator,
    column_means,
    to_dense,
)
from randpca.linalg.rangefinder import find_range, random_test_block


def _use_direct(cfg: SketchConfig, m: int, n: int) -> bool:
    return cfg.direct and cfg.l >= min(m, n) / settings.DIRECT_RATIO


def _order_by_magnitude(lam: np.ndarray) -> np.ndarray:
    return np.argsort(-np.abs(lam), kind="stable")


def check_selfadjoint(
    op: LinearOperator, seed: int, definite: bool = False
) -> None:
    """
    Tests <A x, y> = <x, A y> on random vectors, and optionally
    <x, A x> >= 0, to within settings.SELFADJOINT_CHECK_TOL * ||A||.

    Raises:
    - DomainError: a check failed.
    """
    if op.m != op.n:
        raise DomainError(f"self-adjoint input must be square, got {op.m}x{op.n}")
    tol = settings.SELFADJOINT_CHECK_TOL
    P = random_test_block(op.n, 2, child_seed(seed, 7))
    x, y = P[:, 0], P[:, 1]
    AP = op.apply(P)
    Ax, Ay = AP[:, 0], AP[:, 1]
    nx, ny = np.linalg.norm(x), np.linalg.norm(y)
    anorm = max(np.linalg.norm(Ax) / nx, np.linalg.norm(Ay) / ny)

    if abs(Ax @ y - x @ Ay) > tol * anorm * nx * ny:
        logger.warning(f"Self-adjointness check failed for {op!r}.")
        raise DomainError("matrix is not self-adjoint (random test vectors)")
    if definite and min(x @ Ax / nx**2, y @ Ay / ny**2) < -tol * anorm:
        logger.warning(f"Definiteness check failed for {op!r}.")
        raise DomainError("matrix is not nonnegative-definite (random test vectors)")


def rsvd(op: OperatorLike, cfg: SketchConfig) -> LowRankSVD:
    """
    Randomized truncated SVD, A ~ U diag(S) V^H.

    For m >= n the range of A is sketched and the l x n matrix Q^H A is
    decomposed; for m < n the range of A^H is sketched instead, so the
    dense SVD is always of an l x min(m, n) block. Factors are truncated
    from l to k after the small SVD.

    Args:
    - op (OperatorLike): m x n matrix or operator.
    - cfg (SketchConfig): k <= min(m, n).

    Returns:
    - LowRankSVD: U (m x k), S (k, nonincreasing), V (n x k).
    """
    op = aslinearoperator(op)
    m, n = op.shape
    cfg.check_shape(m, n)
    k = cfg.k

    if _use_direct(cfg, m, n):
        logger.info(f"rsvd: decomposing {op!r} directly (l={cfg.l}).")
        U, S, Vt = svd(to_dense(op), full_matrices=False)
        return LowRankSVD(U=U[:, :k], S=S[:k], V=Vt[:k].T)

    if m >= n:
        Q = find_range(op, cfg, mode="plain").Q
        B = op.apply_adjoint(Q).T
        W, S, Vt = svd(B, full_matrices=False)
        U, V = Q @ W, Vt.T
    else:
        Q = find_range(op, cfg, mode="adjoint").Q
        B = op.apply(Q)
        U, S, Rt = svd(B, full_matrices=False)
        V = Q @ Rt.T

    logger.debug(f"rsvd on {op!r}: k={k}, l={Q.shape[1]}, leading S={S[:1]}")
    return LowRankSVD(U=U[:, :k], S=S[:k], V=V[:, :k])


def rpca(op: OperatorLike, cfg: SketchConfig, center: bool = True) -> LowRankSVD:
    """
    Principal component analysis: rsvd of the column-centered matrix,
    which is applied implicitly so sparse inputs stay sparse. The column
    means are returned in `mean`.
    """
    op = aslinearoperator(op)
    if not center:
        return rsvd(op, cfg)
    c = column_means(op)
    f = rsvd(CenteredOperator(op, c), cfg)
    return f.model_copy(update={"mean": c})


def reig(op: OperatorLike, cfg: SketchConfig) -> EigenApprox:
    """
    Eigendecomposition of a self-adjoint matrix, A ~ U diag(lam) U^H.

    T = Q^H A Q is symmetrized as (T + T^H)/2 before its dense
    eigendecomposition; eigenpairs are kept by decreasing |lam| and
    signs are preserved.

    Raises:
    - DomainError: the self-adjointness check failed.
    """
    op = aslinearoperator(op)
    cfg.check_shape(*op.shape)
    check_selfadjoint(op, cfg.seed)
    k = cfg.k

    if _use_direct(cfg, *op.shape):
        lam, W = eigh(to_dense(op))
        idx = _order_by_magnitude(lam)[:k]
        return EigenApprox(U=W[:, idx], lam=lam[idx])

    Q = find_range(op, cfg, mode="self-adjoint").Q
    T = Q.T @ op.apply(Q)
    T = (T + T.T) / 2
    lam, W = eigh(T)
    idx = _order_by_magnitude(lam)[:k]
    return EigenApprox(U=Q @ W[:, idx], lam=lam[idx])

