# randpca/linalg/rangefinder.py

"""
Randomized range finder: an orthonormal Q with A ~ Q Q^H A, built from a
random sketch refined by power/subspace iterations. Interior iterations
renormalize with a pivoted LU (cheaper than QR); the final step uses QR.
"""

import numpy as np
from scipy.linalg import lu, qr

from randpca.core.exceptions import ConfigError
from randpca.core.logging_config import logger
from randpca.core.models import LUResult, RangeBasis, RangeMode, SketchConfig
from randpca.core.rng import Seed, make_rng
from randpca.linalg.matop import OperatorLike, aslinearoperator


def random_test_block(rows: int, cols: int, seed: Seed) -> np.ndarray:
    """
    rows x cols block with i.i.d. entries uniform on [-1, 1].
    Identical (rows, cols, seed) give identical blocks.
    """
    if rows < 1 or cols < 1:
        raise ConfigError(f"test block needs positive dimensions, got {rows}x{cols}")
    return make_rng(seed).uniform(low=-1.0, high=1.0, size=(rows, cols))


def _numerical_rank(R: np.ndarray) -> int:
    d = np.abs(np.diag(R))
    if d.size == 0 or d.max() == 0.0:
        return 0
    tol = max(R.shape) * np.finfo(np.float64).eps * d.max()
    return int(np.count_nonzero(d > tol))


def orthonormalize(X: np.ndarray, pivoting: bool = False) -> RangeBasis:
    """
    Orthonormal basis for the columns of X via an economic QR.

    Householder QR returns orthonormal columns even when X is rank
    deficient; the columns past the numerical rank then complete the
    basis and `rank_deficient` is set.

    Args:
    - X (np.ndarray): m x l block.
    - pivoting (bool): use column-pivoted QR.

    Returns:
    - RangeBasis: Q of shape m x min(m, l).
    """
    if pivoting:
        Q, R, _ = qr(X, mode="economic", pivoting=True, check_finite=False)
    else:
        Q, R = qr(X, mode="economic", check_finite=False)
    rank = _numerical_rank(R)
    deficient = rank < min(X.shape)
    if deficient:
        logger.warning(
            f"Sketch of shape {X.shape} has numerical rank {rank}; "
            "completing the basis with orthonormal columns."
        )
    return RangeBasis(Q=Q, rank_deficient=deficient)


def lu_renormalize_checked(X: np.ndarray) -> LUResult:
    """
    Permuted unit-lower-triangular factor P L of a partially pivoted LU
    of X. Zero pivots are tolerated and reported through `singular`.
    """
    PL, U = lu(X, permute_l=True, check_finite=False)
    singular = bool(np.any(np.diag(U) == 0.0))
    if singular:
        logger.warning(f"LU renormalization of a {X.shape} block hit a zero pivot.")
    return LUResult(L=PL, singular=singular)


def lu_renormalize(X: np.ndarray) -> np.ndarray:
    """
    Same column space as X (when X has full column rank) with every entry
    bounded by 1 in magnitude.
    """
    return lu_renormalize_checked(X).L


def find_range(
    op: OperatorLike, cfg: SketchConfig, mode: RangeMode = "plain"
) -> RangeBasis:
    """
    Builds Q for the range of A (or of A^H in "adjoint" mode).

    Q0 comes from A applied to a uniform [-1, 1] test block; each of the
    `cfg.its` rounds applies A (self-adjoint mode) or A A^H (plain mode).
    Every interior product is followed by LU renormalization and the
    last one by QR. With its = 0 the single sketch is QR-orthonormalized.

    Args:
    - op (OperatorLike): the matrix.
    - cfg (SketchConfig): rank, width, iterations, seed.
    - mode (RangeMode): "plain", "self-adjoint" (requires m = n) or
      "adjoint" (basis for the range of A^H, i.e. the row space of A).

    Returns:
    - RangeBasis: Q with orthonormal columns.
    """
    op = aslinearoperator(op)
    if mode == "adjoint":
        return find_range(op.H, cfg, mode="plain")

    m, n = op.shape
    cfg.check_shape(m, n)
    if mode == "self-adjoint" and m != n:
        raise ConfigError(f"self-adjoint range finding needs a square matrix, got {m}x{n}")

    l = cfg.width(m, n)
    logger.debug(
        f"find_range on {op!r}: mode={mode}, l={l}, its={cfg.its}, seed={cfg.seed}"
    )

    Q = op.apply(random_test_block(n, l, cfg.seed))
    if cfg.its == 0:
        return orthonormalize(Q, pivoting=cfg.pivoting)

    step = lu_renormalize_checked(Q)
    Q, deficient = step.L, step.singular
    for it in range(cfg.its):
        if mode == "plain":
            step = lu_renormalize_checked(op.apply_adjoint(Q))
            Q, deficient = step.L, deficient or step.singular
        Q = op.apply(Q)
        if it + 1 < cfg.its:
            step = lu_renormalize_checked(Q)
            Q, deficient = step.L, deficient or step.singular

    basis = orthonormalize(Q, pivoting=cfg.pivoting)
    return RangeBasis(Q=basis.Q, rank_deficient=basis.rank_deficient or deficient)
