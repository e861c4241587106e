# randpca/storage/matrix_market.py

import os
from typing import Iterator, List, Tuple, Union

import numpy as np
import scipy.sparse as sp
from scipy.io import mmwrite

from randpca.core.exceptions import DomainError, MatrixMarketError
from randpca.core.logging_config import logger
from randpca.linalg.matop import (
    DenseMatrix,
    LinearOperator,
    SparseMatrix,
    SymmetricSparseMatrix,
)

BANNER = "%%matrixmarket"
FORMATS = ("coordinate", "array")
FIELDS = ("real", "integer", "pattern")
SYMMETRIES = ("general", "symmetric")


def _decoded_lines(handle) -> Iterator[Tuple[int, str]]:
    """
    Yields (line number, text) from a binary handle. Comment lines may
    carry any bytes; anything else must be ASCII.
    """
    for number, raw in enumerate(handle, start=1):
        try:
            yield number, raw.decode("ascii")
        except UnicodeDecodeError:
            if raw.lstrip().startswith(b"%"):
                yield number, raw.decode("ascii", errors="replace")
            else:
                raise MatrixMarketError("non-ASCII bytes outside a comment", line=number)


def _data_lines(lines: Iterator[Tuple[int, str]]) -> Iterator[Tuple[int, List[str]]]:
    """Yields (line number, tokens) for every non-comment, non-blank line."""
    for number, line in lines:
        stripped = line.strip()
        if not stripped or stripped.startswith("%"):
            continue
        yield number, stripped.split()


def _parse_header(line: str) -> Tuple[str, str, str]:
    tokens = line.strip().lower().split()
    if len(tokens) != 5 or tokens[0] != BANNER or tokens[1] != "matrix":
        raise MatrixMarketError(
            "expected '%%MatrixMarket matrix <format> <field> <symmetry>'", line=1
        )
    fmt, field, symmetry = tokens[2:]
    if fmt not in FORMATS:
        raise MatrixMarketError(f"unsupported format '{fmt}'", line=1)
    if field not in FIELDS:
        raise MatrixMarketError(f"unsupported field '{field}'", line=1)
    if symmetry not in SYMMETRIES:
        raise MatrixMarketError(f"unsupported symmetry '{symmetry}'", line=1)
    if fmt == "array" and field == "pattern":
        raise MatrixMarketError("pattern field is not allowed for array format", line=1)
    return fmt, field, symmetry


def _parse_ints(tokens: List[str], count: int, number: int, what: str) -> List[int]:
    if len(tokens) != count:
        raise MatrixMarketError(f"{what}: expected {count} integers", line=number)
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise MatrixMarketError(f"{what}: non-integer token", line=number)


def _parse_value(token: str, number: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise MatrixMarketError(f"invalid value '{token}'", line=number)
    if not np.isfinite(value):
        raise MatrixMarketError(f"non-finite value '{token}'", line=number)
    return value


def _read_coordinate(lines, field: str, symmetry: str) -> LinearOperator:
    try:
        number, tokens = next(lines)
    except StopIteration:
        raise MatrixMarketError("missing size line")
    m, n, entries = _parse_ints(tokens, 3, number, "size line")
    if m < 1 or n < 1 or entries < 0:
        raise MatrixMarketError("dimensions must be positive", line=number)
    if symmetry == "symmetric" and m != n:
        raise MatrixMarketError("symmetric matrix must be square", line=number)

    width = 2 if field == "pattern" else 3
    rows = np.empty(entries, dtype=np.int64)
    cols = np.empty(entries, dtype=np.int64)
    vals = np.ones(entries, dtype=np.float64)
    count = 0
    for number, tokens in lines:
        if count == entries:
            raise MatrixMarketError(f"more than {entries} entries", line=number)
        if len(tokens) != width:
            raise MatrixMarketError(f"expected {width} tokens per entry", line=number)
        i, j = _parse_ints(tokens[:2], 2, number, "entry")
        if not (1 <= i <= m and 1 <= j <= n):
            raise MatrixMarketError(
                f"index ({i}, {j}) out of bounds for {m}x{n}", line=number
            )
        if width == 3:
            vals[count] = _parse_value(tokens[2], number)
        # symmetric files store the lower triangle; mirror stray upper entries
        if symmetry == "symmetric" and i < j:
            i, j = j, i
        rows[count] = i - 1
        cols[count] = j - 1
        count += 1
    if count != entries:
        raise MatrixMarketError(f"expected {entries} entries, found {count}")

    coo = sp.coo_matrix((vals, (rows, cols)), shape=(m, n))
    if symmetry == "symmetric":
        return SymmetricSparseMatrix(coo)
    return SparseMatrix(coo)


def _read_array(lines, symmetry: str) -> LinearOperator:
    try:
        number, tokens = next(lines)
    except StopIteration:
        raise MatrixMarketError("missing size line")
    m, n = _parse_ints(tokens, 2, number, "size line")
    if m < 1 or n < 1:
        raise MatrixMarketError("dimensions must be positive", line=number)
    if symmetry == "symmetric" and m != n:
        raise MatrixMarketError("symmetric matrix must be square", line=number)

    if symmetry == "symmetric":
        positions = [(i, j) for j in range(n) for i in range(j, m)]
    else:
        positions = [(i, j) for j in range(n) for i in range(m)]

    A = np.zeros((m, n), order="F")
    count = 0
    for number, tokens in lines:
        for token in tokens:
            if count == len(positions):
                raise MatrixMarketError(
                    f"more than {len(positions)} values", line=number
                )
            i, j = positions[count]
            A[i, j] = _parse_value(token, number)
            if symmetry == "symmetric":
                A[j, i] = A[i, j]
            count += 1
    if count != len(positions):
        raise MatrixMarketError(f"expected {len(positions)} values, found {count}")
    return DenseMatrix(A)


def read_matrix_market(path: Union[str, os.PathLike]) -> LinearOperator:
    """
    Reads a real Matrix Market file.

    Args:
    - path (str | PathLike): coordinate or array file, `general` or
      `symmetric`; `integer` and `pattern` fields are read as real.

    Returns:
    - LinearOperator: SparseMatrix for coordinate/general,
      SymmetricSparseMatrix (lower triangle only) for coordinate/symmetric,
      DenseMatrix for array files.

    Raises:
    - MatrixMarketError: malformed header, bad index or value; the
      message carries the offending line number.
    """
    with open(path, "rb") as handle:
        decoded = _decoded_lines(handle)
        _, header = next(decoded, (1, ""))
        if not header:
            raise MatrixMarketError("empty file", line=1)
        fmt, field, symmetry = _parse_header(header)
        lines = _data_lines(decoded)
        if fmt == "coordinate":
            op = _read_coordinate(lines, field, symmetry)
        else:
            op = _read_array(lines, symmetry)

    logger.info(f"Read {op!r} ({fmt}, {symmetry}) from '{path}'.")
    return op


def write_matrix_market(
    path: Union[str, os.PathLike], matrix, comment: str = ""
) -> None:
    """
    Writes a matrix through `scipy.io.mmwrite` with 17 significant digits,
    so reading it back is exact.

    Args:
    - path (str | PathLike): destination file, written under this exact name.
    - matrix: numpy array or DenseMatrix (array format), scipy sparse or
      SparseMatrix (coordinate/general), SymmetricSparseMatrix
      (coordinate/symmetric, lower triangle).
    - comment (str): optional text written as '%' comment lines.

    Raises:
    - DomainError: the matrix has non-finite entries.
    - OSError: the file cannot be written.
    """
    if isinstance(matrix, SymmetricSparseMatrix):
        # mmwrite keeps only the lower triangle of a symmetric matrix, which
        # is exactly what is stored
        fmt, symmetry, data = "coordinate", "symmetric", sp.csc_matrix(matrix.matrix)
    elif isinstance(matrix, SparseMatrix):
        fmt, symmetry, data = "coordinate", "general", sp.csc_matrix(matrix.matrix)
    elif isinstance(matrix, DenseMatrix):
        fmt, symmetry, data = "array", "general", np.asarray(matrix.matrix)
    elif sp.issparse(matrix):
        fmt, symmetry, data = "coordinate", "general", sp.csc_matrix(matrix)
    else:
        data = np.asarray(matrix, dtype=np.float64)
        if data.ndim == 1:
            data = data[:, np.newaxis]
        fmt, symmetry = "array", "general"

    values = data.data if fmt == "coordinate" else data
    if not np.isfinite(values).all():
        raise DomainError(f"refusing to write non-finite entries to '{path}'")

    if fmt == "coordinate":
        data = data.astype(np.float64)
        data.sort_indices()
    else:
        data = np.asarray(data, dtype=np.float64)

    # an open handle keeps older scipy from appending '.mtx' to the name
    with open(path, "wb") as out:
        mmwrite(
            out, data, comment=comment, field="real", precision=17, symmetry=symmetry
        )

    m, n = data.shape
    logger.info(f"Wrote {m}x{n} {fmt} matrix to '{path}'.")
