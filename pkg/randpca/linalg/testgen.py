# randpca/linalg/testgen.py

"""
Test matrices with known spectra: six singular-value distributions with
random orthonormal factors, the diagonal matrices on which restarted
Lanczos codes without full reorthogonalization return wrong singular
values, and the sign-flipped Gaussian matrix whose two dominant singular
values make power iterations necessary.
"""

from typing import Literal, Optional, Tuple, Union

import numpy as np
import scipy.sparse as sp
from pydantic import BaseModel, ConfigDict
from scipy.linalg import qr

from randpca.core.exceptions import ConfigError
from randpca.core.logging_config import logger
from randpca.core.models import SpectrumSpec, SyntheticMatrix
from randpca.core.rng import Seed, child_seed, make_rng
from randpca.linalg.matop import DenseMatrix, LinearOperator, SparseMatrix

HardPattern = Literal["30-case", "100-case"]

# optimal rank-k error for the k-dependent distributions
TAIL = 1e-5


def spectrum(spec: SpectrumSpec, seed: Seed = None) -> np.ndarray:
    """
    Singular values sigma_1 ... sigma_min(m, n) for `spec.dist`.

    For "step", "exp-decay", "exp-decay-cut" and "linear", sigma_1 = 1 and
    sigma_{k+1} = 1e-5 exactly. "gaussian-abs" draws |N(0, 1)| values
    from `seed`, sorted nonincreasing, and ignores k.

    Raises:
    - ConfigError: k outside 1 <= k < min(m, n) for a k-dependent
      distribution (the geometric heads also need k >= 2).
    """
    p = min(spec.m, spec.n)
    k = spec.k
    j = np.arange(1, p + 1, dtype=np.float64)

    if spec.dist == "inv-j":
        return 1.0 / j
    if spec.dist == "gaussian-abs":
        return np.sort(np.abs(make_rng(seed).standard_normal(p)))[::-1].copy()

    if not 1 <= k < p:
        raise ConfigError(f"distribution '{spec.dist}' needs 1 <= k < {p}, got k={k}")
    if spec.dist != "step" and k < 2:
        raise ConfigError(f"distribution '{spec.dist}' needs k >= 2, got k={k}")

    head, tail = j[:k], j[k:]
    sigma = np.empty(p)
    if spec.dist == "step":
        sigma[:k] = 2 * TAIL
        sigma[0] = 1.0
        sigma[k:] = TAIL * ((k + 1) / tail)
    elif spec.dist in ("exp-decay", "exp-decay-cut"):
        sigma[:k] = 10.0 ** (-5.0 * (head - 1) / (k - 1))
        if spec.dist == "exp-decay":
            sigma[k:] = TAIL * ((k + 1) / tail)
        else:
            sigma[k:] = 0.0
            sigma[k] = TAIL
    else:
        t = (k - head) / (k - 1)
        sigma[:k] = t + TAIL * (1 - t)
        sigma[k:] = TAIL * np.sqrt((k + 1) / tail)
    return sigma


def random_orthonormal(dim: int, cols: int, seed: Seed) -> np.ndarray:
    """
    dim x cols block with orthonormal columns from the QR of a Gaussian
    block, signs fixed so that diag(R) > 0 (Haar distributed).
    """
    if not 1 <= cols <= dim:
        raise ConfigError(f"need 1 <= cols <= dim, got cols={cols}, dim={dim}")
    G = make_rng(seed).standard_normal((dim, cols))
    Q, R = qr(G, mode="economic", check_finite=False)
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    return Q * signs


def synth(spec: SpectrumSpec, seed: int) -> SyntheticMatrix:
    """
    A = U diag(sigma) V^H with random orthonormal U (m x p) and V (n x p),
    p = min(m, n). The exact factors are kept for accuracy checks.
    """
    sigma = spectrum(spec, child_seed(seed, 0))
    p = len(sigma)
    U = random_orthonormal(spec.m, p, child_seed(seed, 1))
    V = random_orthonormal(spec.n, p, child_seed(seed, 2))
    A = (U * sigma) @ V.T
    logger.debug(f"synth: {spec.dist} {spec.m}x{spec.n} k={spec.k} seed={seed}")
    return SyntheticMatrix(A=A, U=U, sigma=sigma, V=V, spec=spec)


def psd_with_spectrum(n: int, lam: np.ndarray, seed: int) -> DenseMatrix:
    """Nonnegative-definite V diag(lam) V^H with Haar-random V."""
    lam = np.asarray(lam, dtype=np.float64)
    if lam.shape != (n,) or (lam < 0).any():
        raise ConfigError(f"need {n} nonnegative eigenvalues, got shape {lam.shape}")
    V = random_orthonormal(n, n, seed)
    A = (V * lam) @ V.T
    return DenseMatrix((A + A.T) / 2)


def propack_hard_diag(n: Optional[int] = None, pattern: HardPattern = "30-case") -> SparseMatrix:
    """
    Diagonal matrix with entries 1, 1, 1, then seventeen .999, then zeros.
    The 30-case defaults to n = 30 and the 100-case to n = 100.
    """
    if n is None:
        n = 30 if pattern == "30-case" else 100
    if n < 20:
        raise ConfigError(f"hard diagonal needs n >= 20, got {n}")
    d = np.zeros(n)
    d[:3] = 1.0
    d[3:20] = 0.999
    return SparseMatrix(sp.diags(d, format="csc"))


def sign_flipped_gaussian(n: int, seed: Seed) -> DenseMatrix:
    """
    n x n Gaussian entries of mean sqrt(30/n) and variance 1, with the
    sign flipped wherever i*j is odd (1-based indices).
    """
    if n < 2:
        raise ConfigError(f"sign-flipped matrix needs n >= 2, got {n}")
    A = make_rng(seed).normal(loc=np.sqrt(30.0 / n), scale=1.0, size=(n, n))
    odd = (np.arange(1, n + 1) % 2 == 1)
    A[np.ix_(odd, odd)] *= -1.0
    return DenseMatrix(A)


class GeneratedMatrix(BaseModel):
    """A generated operator plus its exact singular values when known."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    op: LinearOperator
    sigma: Optional[np.ndarray] = None
    label: str


def generate(
    dist: Union[str, int], m: int, n: int, k: int, seed: int, psd: bool = False
) -> GeneratedMatrix:
    """
    Builds any named test matrix.

    Args:
    - dist: "1".."6" (or names), "hard30", "hard100" or "signflip".
    - m, n, k: shape and head length (hard* and signflip use n only).
    - seed (int): generator seed.
    - psd (bool): for distributions 1-6, return the self-adjoint
      nonnegative-definite V diag(sigma) V^H instead (requires m = n).

    Returns:
    - GeneratedMatrix: operator, exact spectrum (None for signflip), label.
    """
    dist = str(dist)
    if dist == "hard30":
        op = propack_hard_diag(n if n >= 20 else None, "30-case")
        return GeneratedMatrix(op=op, sigma=_diag_sigma(op), label=dist)
    if dist == "hard100":
        op = propack_hard_diag(n if n >= 20 else None, "100-case")
        return GeneratedMatrix(op=op, sigma=_diag_sigma(op), label=dist)
    if dist == "signflip":
        return GeneratedMatrix(op=sign_flipped_gaussian(n, seed), label=dist)

    spec = SpectrumSpec(dist=dist, m=m, n=n, k=k)
    if psd:
        if m != n:
            raise ConfigError(f"self-adjoint test matrix must be square, got {m}x{n}")
        sigma = spectrum(spec, child_seed(seed, 0))
        op = psd_with_spectrum(n, sigma, child_seed(seed, 1))
        return GeneratedMatrix(op=op, sigma=sigma, label=spec.dist)
    s = synth(spec, seed)
    return GeneratedMatrix(op=DenseMatrix(s.A), sigma=s.sigma, label=spec.dist)


def _diag_sigma(op: SparseMatrix) -> np.ndarray:
    return np.sort(np.abs(op.matrix.diagonal()))[::-1].copy()


def split_shape(text: str) -> Tuple[int, int]:
    """Parses 'MxN' or 'N' (square)."""
    try:
        if "x" in text:
            m, n = text.lower().split("x")
            return int(m), int(n)
        return int(text), int(text)
    except ValueError:
        raise ConfigError(f"invalid size '{text}', expected MxN or N")
