# randpca/linalg/specnorm.py

"""
Spectral-norm estimation by the power method with a random start, and
the discrepancy ||A - U diag(S) V^H|| measured without forming it.

Estimates are lower bounds (up to roundoff). With a random start the
estimate is within a factor of two of the true norm except with
probability decaying exponentially in the iteration count, so callers
needing an upper bound double the value.
"""

from typing import Optional, Union

import numpy as np

from randpca.core.config import settings
from randpca.core.exceptions import ConfigError, ShapeError
from randpca.core.logging_config import logger
from randpca.core.models import EigenApprox, LowRankSVD, SpectralEstimate
from randpca.linalg.matop import (
    CenteredOperator,
    LinearOperator,
    OperatorLike,
    aslinearoperator,
    fro_norm,
)
from randpca.linalg.rangefinder import random_test_block


class DiscrepancyOperator(LinearOperator):
    """x -> A x - U (S (V^H x)), with the adjoint formed the same way."""

    variant = "discrepancy"

    def __init__(self, inner: LinearOperator, U: np.ndarray, S: np.ndarray, V: np.ndarray):
        m, n = inner.shape
        k = len(S)
        if U.shape != (m, k) or V.shape != (n, k):
            raise ShapeError(
                f"factors U{U.shape}, S({k},), V{V.shape} do not match a {m}x{n} matrix"
            )
        super().__init__(inner.shape)
        self.inner, self.U, self.S, self.V = inner, U, S, V

    def _matmat(self, X):
        return self.inner._matmat(X) - self.U @ (self.S[:, None] * (self.V.T @ X))

    def _rmatmat(self, Y):
        return self.inner._rmatmat(Y) - self.V @ (self.S[:, None] * (self.U.T @ Y))


def snorm(
    op: OperatorLike,
    its: Optional[int] = None,
    seed: Optional[int] = None,
    tol: float = 0.0,
) -> SpectralEstimate:
    """
    Estimates ||A|| by power iterations on A^H A.

    The start vector has uniform [-1, 1] entries; each step applies
    A^H A and renormalizes. The value returned is the square root of the
    final Rayleigh quotient, ||A x|| for the last unit vector x.

    With tol = 0 exactly `its` steps run. With tol > 0, `its` is a cap and
    the iteration stops once the estimate changes by at most tol relative
    to its value between consecutive steps.

    Args:
    - op (OperatorLike): the operator.
    - its (int): iterations (or the cap), at least 1 (default settings.SNORM_ITS).
    - seed (int): start-vector seed (default settings.DEFAULT_SEED).
    - tol (float): relative-change stopping tolerance, 0 disables it.

    Returns:
    - SpectralEstimate: 0 for the zero operator; its_used counts the
      A^H A applications.
    """
    op = aslinearoperator(op)
    its = settings.SNORM_ITS if its is None else its
    seed = settings.DEFAULT_SEED if seed is None else seed
    if its < 1:
        raise ConfigError(f"snorm needs at least one iteration, got {its}")
    if tol < 0:
        raise ConfigError(f"snorm tolerance must be nonnegative, got {tol}")

    x = random_test_block(op.n, 1, seed)
    x /= np.linalg.norm(x)
    previous = -1.0
    used = 0
    while used < its:
        y = op._matmat(x)
        estimate = float(np.linalg.norm(y))
        if tol > 0 and abs(estimate - previous) <= tol * estimate:
            break
        previous = estimate
        x = op._rmatmat(y)
        norm = np.linalg.norm(x)
        used += 1
        if norm == 0.0:
            logger.debug(f"snorm: {op!r} annihilated the iterate; norm is 0.")
            return SpectralEstimate(value=0.0, its_used=used, seed=seed)
        x /= norm

    if tol > 0 and used == its:
        logger.debug(f"snorm: stopped at the cap of {its} steps before reaching tol={tol:g}.")
    value = float(np.linalg.norm(op._matmat(x)))
    return SpectralEstimate(value=value, its_used=used, seed=seed)


def diffsnorm(
    op: OperatorLike,
    f: LowRankSVD,
    its: Optional[int] = None,
    seed: Optional[int] = None,
    tol: float = 0.0,
) -> SpectralEstimate:
    """
    Estimates ||A - U diag(S) V^H|| without forming the difference. When
    `f.mean` is set the discrepancy is against the column-centered A.
    """
    op = aslinearoperator(op)
    if f.mean is not None:
        op = CenteredOperator(op, f.mean)
    return snorm(DiscrepancyOperator(op, f.U, f.S, f.V), its=its, seed=seed, tol=tol)


def diffsnorm_eig(
    op: OperatorLike,
    f: EigenApprox,
    its: Optional[int] = None,
    seed: Optional[int] = None,
    tol: float = 0.0,
) -> SpectralEstimate:
    """Estimates ||A - U diag(lam) U^H|| for a self-adjoint approximation."""
    op = aslinearoperator(op)
    return snorm(DiscrepancyOperator(op, f.U, f.lam, f.U), its=its, seed=seed, tol=tol)


def fro_discrepancy(op: OperatorLike, f: Union[LowRankSVD, EigenApprox]) -> float:
    """
    Frobenius norm of A - U diag(S) V^H from one block product, using
    orthonormality of U and V:
    ||A||_F^2 - 2 sum_i S_i u_i^H A v_i + sum_i S_i^2.
    """
    op = aslinearoperator(op)
    if isinstance(f, EigenApprox):
        U, S, V = f.U, f.lam, f.U
    else:
        U, S, V = f.U, f.S, f.V
        if f.mean is not None:
            op = CenteredOperator(op, f.mean)
    AV = op.apply(V) if V.shape[1] else np.zeros((op.m, 0))
    cross = float(np.sum(S * np.einsum("ij,ij->j", U, AV)))
    total = fro_norm(op) ** 2 - 2.0 * cross + float(S @ S)
    return float(np.sqrt(max(total, 0.0)))
