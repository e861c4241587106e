# randpca/linalg/matop.py

"""
Matrix storage formats and the linear-operator abstraction.

Everything downstream touches a matrix only through `apply` (A X) and
`apply_adjoint` (A^H Y) on blocks of column vectors, so dense, sparse,
column-centered and adjoint-composed matrices are interchangeable.
"""

from abc import ABC, abstractmethod
from typing import Optional, Tuple, Union

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from randpca.core.exceptions import DomainError, ShapeError
from randpca.core.logging_config import logger

OperatorLike = Union["LinearOperator", np.ndarray, sp.spmatrix, sp.sparray]


def _as_block(X, rows: int, what: str) -> Tuple[np.ndarray, bool]:
    """
    Validates a block of column vectors. A 1-D input is treated as a
    single column; the flag tells the caller to flatten the result.
    """
    X = np.asarray(X, dtype=np.float64)
    vector = X.ndim == 1
    if vector:
        X = X[:, np.newaxis]
    if X.ndim != 2 or X.shape[0] != rows:
        raise ShapeError(f"{what}: expected {rows} rows, got shape {X.shape}")
    if X.shape[1] < 1:
        raise ShapeError(f"{what}: block must have at least one column")
    if not np.isfinite(X).all():
        raise DomainError(f"{what}: block contains non-finite entries")
    return X, vector


class LinearOperator(ABC):
    """
    Immutable m x n real operator. Subclasses implement the two block
    products; validation and vector handling live here.
    """

    variant = "abstract"

    def __init__(self, shape: Tuple[int, int]):
        self.shape = (int(shape[0]), int(shape[1]))

    @property
    def m(self) -> int:
        return self.shape[0]

    @property
    def n(self) -> int:
        return self.shape[1]

    @property
    def H(self) -> "LinearOperator":
        return AdjointOperator(self)

    def apply(self, X) -> np.ndarray:
        """Returns A X for a block X with n rows."""
        X, vector = _as_block(X, self.n, f"apply on {self!r}")
        Y = self._matmat(X)
        return Y[:, 0] if vector else Y

    def apply_adjoint(self, Y) -> np.ndarray:
        """Returns A^H Y for a block Y with m rows."""
        Y, vector = _as_block(Y, self.m, f"apply_adjoint on {self!r}")
        X = self._rmatmat(Y)
        return X[:, 0] if vector else X

    @abstractmethod
    def _matmat(self, X: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def _rmatmat(self, Y: np.ndarray) -> np.ndarray: ...

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.m}x{self.n})"


class DenseMatrix(LinearOperator):
    """Dense matrix held in column-major (Fortran) order."""

    variant = "dense"

    def __init__(self, A):
        A = np.asarray(A, dtype=np.float64)
        if A.ndim != 2:
            raise ShapeError(f"dense matrix must be 2-D, got {A.ndim}-D")
        if not np.isfinite(A).all():
            raise DomainError("dense matrix contains non-finite entries")
        super().__init__(A.shape)
        self.matrix = np.array(A, order="F")
        self.matrix.flags.writeable = False

    def _matmat(self, X):
        return self.matrix @ X

    def _rmatmat(self, Y):
        return self.matrix.T @ Y


class SparseMatrix(LinearOperator):
    """
    Compressed sparse column storage: column pointers, strictly increasing
    row indices within each column, finite nonzero values.
    """

    variant = "sparse"

    def __init__(self, A):
        A = sp.csc_matrix(A, dtype=np.float64, copy=True)
        A.sum_duplicates()
        A.eliminate_zeros()
        A.sort_indices()
        if not np.isfinite(A.data).all():
            raise DomainError("sparse matrix contains non-finite values")
        super().__init__(A.shape)
        self.matrix = A

    @property
    def nnz(self) -> int:
        return int(self.matrix.nnz)

    def _matmat(self, X):
        return np.asarray(self.matrix @ X)

    def _rmatmat(self, Y):
        # (Y^H A)^H: uses the column storage of A without forming A^H.
        return np.asarray(self.matrix.T @ Y)


class SymmetricSparseMatrix(SparseMatrix):
    """
    Symmetric matrix stored as its lower triangle only, as in a
    `symmetric` Matrix Market file. Both triangles act in products.
    """

    variant = "sparse"

    def __init__(self, lower):
        lower = sp.tril(sp.csc_matrix(lower, dtype=np.float64), format="csc")
        if lower.shape[0] != lower.shape[1]:
            raise ShapeError(f"symmetric storage must be square, got {lower.shape}")
        super().__init__(lower)
        self.diagonal = self.matrix.diagonal()

    @property
    def nnz(self) -> int:
        """Number of nonzeros of the full (logically expanded) matrix."""
        stored = int(self.matrix.nnz)
        return 2 * stored - int(np.count_nonzero(self.diagonal))

    def _matmat(self, X):
        L = self.matrix
        return np.asarray(L @ X) + np.asarray(L.T @ X) - self.diagonal[:, None] * X

    def _rmatmat(self, Y):
        return self._matmat(Y)


class CenteredOperator(LinearOperator):
    """
    The column-centered matrix A - 1 c, where c holds the column means of
    A. The centered matrix is never formed.
    """

    variant = "centered"

    def __init__(self, inner: LinearOperator, c: Optional[np.ndarray] = None):
        super().__init__(inner.shape)
        self.inner = inner
        if c is None:
            c = column_means(inner)
        c = np.asarray(c, dtype=np.float64).reshape(-1)
        if c.shape[0] != inner.n:
            raise ShapeError(f"column means have length {c.shape[0]}, need {inner.n}")
        self.c = c

    def _matmat(self, X):
        return self.inner._matmat(X) - (self.c @ X)[np.newaxis, :]

    def _rmatmat(self, Y):
        return self.inner._rmatmat(Y) - np.outer(self.c, Y.sum(axis=0))


class AdjointOperator(LinearOperator):
    """A^H of an operator, obtained by swapping the two products."""

    variant = "explicit-adjoint"

    def __init__(self, inner: LinearOperator):
        super().__init__((inner.n, inner.m))
        self.inner = inner

    @property
    def H(self) -> LinearOperator:
        return self.inner

    def _matmat(self, X):
        return self.inner._rmatmat(X)

    def _rmatmat(self, Y):
        return self.inner._matmat(Y)


def aslinearoperator(obj: OperatorLike) -> LinearOperator:
    """
    Wraps numpy arrays and scipy sparse matrices; operators pass through.
    """
    if isinstance(obj, LinearOperator):
        return obj
    if sp.issparse(obj):
        return SparseMatrix(obj)
    return DenseMatrix(obj)


def apply(op: OperatorLike, X) -> np.ndarray:
    """A X for a block of q column vectors of length n."""
    return aslinearoperator(op).apply(X)


def apply_adjoint(op: OperatorLike, Y) -> np.ndarray:
    """A^H Y for a block of q column vectors of length m."""
    return aslinearoperator(op).apply_adjoint(Y)


def column_means(op: OperatorLike) -> np.ndarray:
    """
    Means of the columns, c[j] = (sum_i A[i, j]) / m.

    Args:
    - op (OperatorLike): dense or sparse matrix (any operator works,
      through one adjoint product with the all-ones vector).

    Returns:
    - np.ndarray: row vector of length n.
    """
    op = aslinearoperator(op)
    if isinstance(op, DenseMatrix):
        return op.matrix.mean(axis=0)
    if type(op) is SparseMatrix:
        return np.asarray(op.matrix.sum(axis=0)).reshape(-1) / op.m
    return op._rmatmat(np.ones((op.m, 1)))[:, 0] / op.m


def to_dense(op: OperatorLike) -> np.ndarray:
    """Explicit m x n array; intended for small operators and oracles."""
    op = aslinearoperator(op)
    if isinstance(op, DenseMatrix):
        return np.array(op.matrix)
    if type(op) is SparseMatrix:
        return op.matrix.toarray()
    logger.debug(f"Densifying {op!r} through {op.n} unit vectors.")
    return op._matmat(np.eye(op.n))


def nnz(op: OperatorLike) -> int:
    """Number of nonzeros; dense operators count every nonzero entry."""
    op = aslinearoperator(op)
    if isinstance(op, SparseMatrix):
        return op.nnz
    if isinstance(op, DenseMatrix):
        return int(np.count_nonzero(op.matrix))
    if isinstance(op, AdjointOperator):
        return nnz(op.inner)
    return op.m * op.n


def fro_norm(op: OperatorLike) -> float:
    """
    Frobenius norm. Exact for dense and sparse storage; for a centered
    operator it is computed from one adjoint product, without forming A - 1 c.
    """
    op = aslinearoperator(op)
    if isinstance(op, DenseMatrix):
        return float(np.linalg.norm(op.matrix))
    if isinstance(op, SymmetricSparseMatrix):
        data = op.matrix.data
        total = 2.0 * float(data @ data) - float(op.diagonal @ op.diagonal)
        return float(np.sqrt(max(total, 0.0)))
    if isinstance(op, SparseMatrix):
        return float(spla.norm(op.matrix))
    if isinstance(op, CenteredOperator):
        # ||A - 1 c||^2 = ||A||^2 - 2 c.(1^H A) + m ||c||^2
        sums = op.inner._rmatmat(np.ones((op.m, 1)))[:, 0]
        total = fro_norm(op.inner) ** 2 - 2.0 * float(op.c @ sums) + op.m * float(op.c @ op.c)
        return float(np.sqrt(max(total, 0.0)))
    if isinstance(op, AdjointOperator):
        return fro_norm(op.inner)
    return float(np.linalg.norm(to_dense(op)))
