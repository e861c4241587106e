# randpca/storage/factor_store.py

import os
import warnings
from typing import Union

import numpy as np

from randpca.core.exceptions import DomainError, FactorFileError, MatrixMarketError
from randpca.core.logging_config import logger
from randpca.core.models import EigenApprox, LowRankSVD
from randpca.linalg.matop import DenseMatrix
from randpca.storage.matrix_market import read_matrix_market, write_matrix_market

Factors = Union[LowRankSVD, EigenApprox]


def factor_paths(prefix: str) -> dict:
    """File names used for the factors written under `prefix`."""
    return {
        "U": f"{prefix}_U.mtx",
        "V": f"{prefix}_V.mtx",
        "S": f"{prefix}_S.txt",
        "mean": f"{prefix}_mean.txt",
    }


def write_vector(path: str, values: np.ndarray) -> None:
    """One decimal per line with 17 significant digits."""
    values = np.asarray(values, dtype=np.float64).reshape(-1)
    if not np.isfinite(values).all():
        raise DomainError(f"refusing to write non-finite values to '{path}'")
    np.savetxt(path, values, fmt="%.17g", newline="\n")


def read_vector(path: str) -> np.ndarray:
    """Reads a file written by `write_vector`."""
    try:
        with warnings.catch_warnings():
            # an empty file is a valid zero-length column
            warnings.simplefilter("ignore", UserWarning)
            values = np.loadtxt(path, dtype=np.float64, ndmin=1, encoding="ascii")
    except ValueError as e:
        raise FactorFileError(f"{path}: {e}")
    return values.reshape(-1)


def write_factors(prefix: str, f: Factors) -> None:
    """
    Writes U (and V) as Matrix Market array files and S (or lam) as a
    plain-text column. Centered factorizations also get a `_mean` file.
    Self-adjoint factorizations have no V file.
    """
    paths = factor_paths(prefix)
    directory = os.path.dirname(paths["U"])
    if directory:
        os.makedirs(directory, exist_ok=True)

    write_matrix_market(paths["U"], f.U)
    if isinstance(f, EigenApprox):
        write_vector(paths["S"], f.lam)
    else:
        write_matrix_market(paths["V"], f.V)
        write_vector(paths["S"], f.S)
        if f.mean is not None:
            write_vector(paths["mean"], f.mean)
    logger.info(f"Wrote rank-{f.rank} factors under prefix '{prefix}'.")


def _read_block(path: str) -> np.ndarray:
    try:
        op = read_matrix_market(path)
    except MatrixMarketError as e:
        raise FactorFileError(f"{path}: {e.detail}")
    if not isinstance(op, DenseMatrix):
        raise FactorFileError(f"{path}: factor files must use the array format")
    return np.array(op.matrix)


def read_factors(prefix: str) -> Factors:
    """
    Reads factors written by `write_factors`.

    Returns:
    - LowRankSVD when a V file exists, otherwise EigenApprox.

    Raises:
    - FactorFileError: a required file is missing or the shapes disagree.
    """
    paths = factor_paths(prefix)
    for key in ("U", "S"):
        if not os.path.exists(paths[key]):
            raise FactorFileError(f"missing factor file '{paths[key]}'")

    U = _read_block(paths["U"])
    S = read_vector(paths["S"])
    if U.shape[1] != len(S):
        raise FactorFileError(
            f"U has {U.shape[1]} columns but '{paths['S']}' has {len(S)} values"
        )

    if not os.path.exists(paths["V"]):
        return EigenApprox(U=U, lam=S)

    V = _read_block(paths["V"])
    if V.shape[1] != len(S):
        raise FactorFileError(f"V has {V.shape[1]} columns but S has {len(S)} values")
    mean = read_vector(paths["mean"]) if os.path.exists(paths["mean"]) else None
    if mean is not None and len(mean) != V.shape[0]:
        raise FactorFileError(f"mean has {len(mean)} entries, V has {V.shape[0]} rows")
    return LowRankSVD(U=U, S=S, V=V, mean=mean)
