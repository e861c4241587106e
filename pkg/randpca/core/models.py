# randpca/core/models.py

from typing import Any, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from randpca.core.config import settings
from randpca.core.exceptions import ConfigError

# Identifiers used across the library and the CLI.
Distribution = Literal[
    "inv-j", "step", "exp-decay", "exp-decay-cut", "linear", "gaussian-abs"
]
RangeMode = Literal["plain", "self-adjoint", "adjoint"]
Method = Literal["rsvd", "rpca", "reig", "nystrom"]
Suite = Literal["dense", "signflip", "sparse"]

DIST_ALIASES = {
    1: "inv-j",
    2: "step",
    3: "exp-decay",
    4: "exp-decay-cut",
    5: "linear",
    6: "gaussian-abs",
}

ArrayModel = ConfigDict(arbitrary_types_allowed=True, frozen=True)


class SketchConfig(BaseModel):
    """
    Parameters of one randomized factorization.

    `l` defaults to k + settings.DEFAULT_OVERSAMPLE; `its` and `seed`
    default to the configured values.
    """

    model_config = ConfigDict(frozen=True)

    k: int = Field(..., description="Target rank.")
    l: int = Field(..., description="Sketch width (number of random vectors).")
    its: int = Field(
        default_factory=lambda: settings.DEFAULT_ITS,
        description="Number of power/subspace iterations.",
    )
    seed: int = Field(
        default_factory=lambda: settings.DEFAULT_SEED, description="RNG seed."
    )
    pivoting: bool = Field(
        False, description="Use column-pivoted QR for the final orthonormalization."
    )
    direct: bool = Field(
        False,
        description="Decompose densely when l is close to min(m, n).",
    )

    @model_validator(mode="before")
    @classmethod
    def _default_width(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("l") is None and "k" in data:
            data = dict(data)
            data["l"] = data["k"] + settings.DEFAULT_OVERSAMPLE
        return data

    @model_validator(mode="after")
    def _check(self) -> "SketchConfig":
        if self.k < 1:
            raise ConfigError(f"k must be at least 1, got {self.k}")
        if self.l < self.k:
            raise ConfigError(f"l must be at least k={self.k}, got {self.l}")
        if self.its < 0:
            raise ConfigError(f"its must be nonnegative, got {self.its}")
        return self

    def check_shape(self, m: int, n: int) -> None:
        """Raises ConfigError unless k <= min(m, n)."""
        if self.k > min(m, n):
            raise ConfigError(
                f"k={self.k} exceeds min(m, n)={min(m, n)} for a {m}x{n} matrix"
            )

    def width(self, m: int, n: int) -> int:
        """Sketch width actually used against an m x n operator."""
        return min(self.l, m, n)


class RangeBasis(BaseModel):
    """
    Orthonormal basis Q for the approximate range of an operator.
    """

    model_config = ArrayModel

    Q: np.ndarray
    rank_deficient: bool = Field(
        False, description="The sketch fell below full numerical column rank."
    )


class LUResult(BaseModel):
    """Permuted unit-lower-triangular LU factor plus a zero-pivot flag."""

    model_config = ArrayModel

    L: np.ndarray
    singular: bool = False


class LowRankSVD(BaseModel):
    """
    Factors of A ~ U diag(S) V^H. `mean` holds the column means when the
    factorization is of the column-centered matrix.
    """

    model_config = ArrayModel

    U: np.ndarray
    S: np.ndarray
    V: np.ndarray
    mean: Optional[np.ndarray] = None

    @property
    def rank(self) -> int:
        return len(self.S)


class EigenApprox(BaseModel):
    """Factors of a self-adjoint A ~ U diag(lam) U^H."""

    model_config = ArrayModel

    U: np.ndarray
    lam: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.lam)


class NystromIntermediate(BaseModel):
    """
    Intermediate blocks of the stabilized Nystrom scheme:
    B1 = A Q, B2 = Q^H B1, C^2 = B2, F = B1 C^+, and the SVD of F.
    """

    model_config = ArrayModel

    Q: np.ndarray
    B1: np.ndarray
    B2: np.ndarray
    C: np.ndarray
    F: np.ndarray
    U: np.ndarray
    S: np.ndarray


class SpectralEstimate(BaseModel):
    """
    Power-method estimate of a spectral norm. The value is a lower bound
    up to roundoff; double it for a bound that holds with high probability.
    """

    model_config = ConfigDict(frozen=True)

    value: float = Field(..., ge=0.0)
    its_used: int
    seed: Optional[int] = None


class SpectrumSpec(BaseModel):
    """
    Declarative description of the singular values sigma_1 ... sigma_min(m, n).
    `dist` accepts the names or the numeric aliases 1-6.
    """

    model_config = ConfigDict(frozen=True)

    dist: Distribution
    m: int = Field(..., ge=1)
    n: int = Field(..., ge=1)
    k: int = Field(1, ge=1)

    @model_validator(mode="before")
    @classmethod
    def _alias(cls, data: Any) -> Any:
        if isinstance(data, dict):
            dist = data.get("dist")
            if isinstance(dist, str) and dist.isdigit():
                dist = int(dist)
            if isinstance(dist, int):
                if dist not in DIST_ALIASES:
                    raise ConfigError(f"unknown distribution {dist}")
                data = {**data, "dist": DIST_ALIASES[dist]}
            elif dist not in DIST_ALIASES.values():
                raise ConfigError(f"unknown distribution '{dist}'")
        return data


class SyntheticMatrix(BaseModel):
    """A test matrix A = U diag(sigma) V^H together with its exact SVD."""

    model_config = ArrayModel

    A: np.ndarray
    U: np.ndarray
    sigma: np.ndarray
    V: np.ndarray
    spec: Optional[SpectrumSpec] = None


class SparsityScore(BaseModel):
    """alpha = (nnz / (m n)) (k / max(m, n))."""

    model_config = ConfigDict(frozen=True)

    alpha: float

    @property
    def decade(self) -> str:
        """Decade bin label such as '1e-4..1e-3'."""
        if self.alpha <= 0:
            return "0"
        low = int(np.floor(np.log10(self.alpha)))
        return f"1e{low}..1e{low + 1}"


class BenchRecord(BaseModel):
    """
    One row of the benchmark CSV. Field order is the CSV column order.
    """

    method: str
    dist: str
    m: Optional[int] = None
    n: Optional[int] = None
    k: int
    l: int
    its: int
    trial: int
    seed: int
    err: float
    fro_err: float
    runtime_sec: float
    alpha: Optional[float] = None


CSV_COLUMNS = list(BenchRecord.model_fields)
