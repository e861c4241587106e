# tests/conftest.py

import os

os.environ.setdefault("RANDPCA_LOG_TO_FILE", "false")
os.environ.setdefault("RANDPCA_LOG_LEVEL", "WARNING")

import numpy as np
import pytest
from scipy.linalg import svd


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def singular_values(A) -> np.ndarray:
    """Dense oracle: all singular values, nonincreasing."""
    return svd(np.asarray(A), compute_uv=False)


def spectral_norm(A) -> float:
    return float(singular_values(A)[0])


def symmetric_with_eigenvalues(lam, seed) -> np.ndarray:
    """V diag(lam) V^T for a random orthogonal V."""
    lam = np.asarray(lam, dtype=np.float64)
    G = np.random.default_rng(seed).standard_normal((len(lam), len(lam)))
    V, _ = np.linalg.qr(G)
    A = (V * lam) @ V.T
    return (A + A.T) / 2
