# tests/test_rangefinder.py

import numpy as np
import pytest

from randpca.core.exceptions import ConfigError
from randpca.core.models import SketchConfig, SpectrumSpec
from randpca.linalg.matop import DenseMatrix
from randpca.linalg.rangefinder import (
    find_range,
    lu_renormalize,
    lu_renormalize_checked,
    orthonormalize,
    random_test_block,
)
from randpca.linalg.testgen import synth


def test_test_block_is_seeded_and_bounded():
    a = random_test_block(50, 4, seed=9)
    b = random_test_block(50, 4, seed=9)
    np.testing.assert_array_equal(a, b)
    assert a.shape == (50, 4)
    assert np.abs(a).max() <= 1.0
    assert not np.array_equal(a, random_test_block(50, 4, seed=10))


def test_test_block_rejects_empty():
    with pytest.raises(ConfigError):
        random_test_block(0, 3, seed=0)


def test_lu_renormalize_keeps_column_space_and_bounds_entries(rng):
    X = rng.standard_normal((30, 5)) * np.array([1e6, 1.0, 1e-3, 5.0, 1e2])
    L = lu_renormalize(X)
    assert L.shape == (30, 5)
    assert np.abs(L).max() <= 1.0 + 1e-15
    # same column space: projecting X onto span(L) loses nothing
    Q, _ = np.linalg.qr(L)
    residual = X - Q @ (Q.T @ X)
    assert np.linalg.norm(residual) <= 1e-8 * np.linalg.norm(X)


def test_lu_reports_zero_pivot():
    X = np.zeros((4, 2))
    X[0, 0] = 1.0
    result = lu_renormalize_checked(X)
    assert result.singular


def test_orthonormalize_flags_rank_deficiency(rng):
    x = rng.standard_normal((10, 1))
    X = np.hstack([x, np.zeros((10, 1)), rng.standard_normal((10, 1))])
    basis = orthonormalize(X)
    assert basis.Q.shape == (10, 3)
    np.testing.assert_allclose(basis.Q.T @ basis.Q, np.eye(3), atol=1e-12)
    assert basis.rank_deficient
    assert not orthonormalize(rng.standard_normal((10, 3))).rank_deficient


@pytest.mark.parametrize("its", [0, 1, 2, 4])
@pytest.mark.parametrize("pivoting", [False, True])
def test_basis_is_orthonormal(rng, its, pivoting):
    A = rng.standard_normal((40, 25))
    cfg = SketchConfig(k=5, l=8, its=its, pivoting=pivoting)
    Q = find_range(A, cfg).Q
    assert Q.shape == (40, 8)
    np.testing.assert_allclose(Q.T @ Q, np.eye(8), atol=1e-10)


def test_width_is_clamped_to_min_dimension(rng):
    A = rng.standard_normal((12, 6))
    Q = find_range(A, SketchConfig(k=3, l=20)).Q
    assert Q.shape == (12, 6)


@pytest.mark.parametrize("its", [0, 2])
@pytest.mark.parametrize("seed", range(20))
def test_exact_rank_range_is_captured(its, seed):
    gen = np.random.default_rng(seed)
    A = gen.standard_normal((60, 4)) @ gen.standard_normal((4, 30))
    Q = find_range(A, SketchConfig(k=4, l=6, its=its, seed=seed)).Q
    assert np.linalg.norm(A - Q @ (Q.T @ A)) <= 1e-10 * np.linalg.norm(A)


def test_power_iterations_improve_capture():
    s = synth(SpectrumSpec(dist="inv-j", m=200, n=200), seed=3)
    errs = []
    for its in (0, 3):
        Q = find_range(s.A, SketchConfig(k=10, l=12, its=its, seed=1)).Q
        errs.append(np.linalg.norm(s.A - Q @ (Q.T @ s.A), 2))
    assert errs[1] < errs[0]


def test_more_iterations_are_no_worse_over_many_seeds():
    errs = {0: [], 4: []}
    for seed in range(10):
        s = synth(SpectrumSpec(dist="inv-j", m=150, n=120), seed=seed)
        for its in errs:
            Q = find_range(s.A, SketchConfig(k=10, l=12, its=its, seed=seed)).Q
            errs[its].append(np.linalg.norm(s.A - Q @ (Q.T @ s.A), 2))
    assert np.median(errs[4]) <= np.median(errs[0])


def test_adjoint_mode_spans_row_space(rng):
    A = rng.standard_normal((5, 3)) @ rng.standard_normal((3, 40))
    Q = find_range(A, SketchConfig(k=3, l=5), mode="adjoint").Q
    assert Q.shape == (40, 5)
    assert np.linalg.norm(A - (A @ Q) @ Q.T) <= 1e-10 * np.linalg.norm(A)


def test_self_adjoint_mode_needs_square(rng):
    with pytest.raises(ConfigError):
        find_range(rng.standard_normal((6, 5)), SketchConfig(k=2), mode="self-adjoint")


def test_rank_larger_than_matrix_is_rejected(rng):
    with pytest.raises(ConfigError):
        find_range(DenseMatrix(rng.standard_normal((4, 3))), SketchConfig(k=4))


def test_same_seed_same_basis(rng):
    A = rng.standard_normal((30, 20))
    cfg = SketchConfig(k=4, its=2, seed=77)
    np.testing.assert_array_equal(find_range(A, cfg).Q, find_range(A, cfg).Q)
