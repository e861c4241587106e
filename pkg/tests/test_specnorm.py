# tests/test_specnorm.py

import numpy as np
import pytest

from conftest import singular_values, spectral_norm
from randpca.core.exceptions import ConfigError, ShapeError
from randpca.core.models import EigenApprox, LowRankSVD, SketchConfig, SpectrumSpec
from randpca.linalg.drivers import rpca, rsvd
from randpca.linalg.matop import DenseMatrix
from randpca.linalg.specnorm import (
    DiscrepancyOperator,
    diffsnorm,
    diffsnorm_eig,
    fro_discrepancy,
    snorm,
)
from randpca.linalg.testgen import propack_hard_diag, synth


def test_estimator_reliability_on_random_matrices():
    within_one_percent = 0
    for seed in range(100):
        A = np.random.default_rng(seed).uniform(0.0, 1.0, size=(100, 100))
        exact = spectral_norm(A)
        est = snorm(A, its=20, seed=seed).value
        assert exact / 2 <= est <= exact * (1 + 1e-10)
        if est >= 0.99 * exact:
            within_one_percent += 1
    assert within_one_percent >= 95


def test_snorm_of_zero_is_zero():
    est = snorm(np.zeros((5, 4)), its=3)
    assert est.value == 0.0


def test_snorm_is_seeded(rng):
    A = rng.standard_normal((30, 20))
    assert snorm(A, its=5, seed=3).value == snorm(A, its=5, seed=3).value


def test_snorm_needs_an_iteration(rng):
    with pytest.raises(ConfigError):
        snorm(rng.standard_normal((3, 3)), its=0)


def test_exact_recovery_gives_roundoff_discrepancy(rng):
    A = rng.standard_normal((40, 3)) @ rng.standard_normal((3, 25))
    f = rsvd(A, SketchConfig(k=3, seed=1))
    assert diffsnorm(A, f, its=20, seed=0).value <= 1e-10 * spectral_norm(A)


def test_zero_factors_give_norm_of_matrix(rng):
    A = rng.uniform(0.0, 1.0, size=(30, 20))
    f = LowRankSVD(U=np.zeros((30, 2)), S=np.zeros(2), V=np.zeros((20, 2)))
    est = diffsnorm(A, f, its=20, seed=0).value
    assert est == pytest.approx(snorm(A, its=20, seed=0).value, rel=1e-12)
    assert est == pytest.approx(spectral_norm(A), rel=1e-6)


def test_discrepancy_operator_matches_explicit_difference(rng):
    A = rng.standard_normal((12, 8))
    U, _ = np.linalg.qr(rng.standard_normal((12, 3)))
    V, _ = np.linalg.qr(rng.standard_normal((8, 3)))
    S = np.array([3.0, 2.0, 1.0])
    D = A - (U * S) @ V.T
    op = DiscrepancyOperator(DenseMatrix(A), U, S, V)
    X = rng.standard_normal((8, 2))
    Y = rng.standard_normal((12, 2))
    np.testing.assert_allclose(op.apply(X), D @ X, atol=1e-12)
    np.testing.assert_allclose(op.apply_adjoint(Y), D.T @ Y, atol=1e-12)
    with pytest.raises(ShapeError):
        DiscrepancyOperator(DenseMatrix(A), U, S, V[:5])


def test_error_is_bounded_below_by_optimal_value():
    # the cut-off spectrum has an isolated sigma_{k+1}, so the estimate converges
    for seed in range(10):
        s = synth(SpectrumSpec(dist="exp-decay-cut", m=80, n=60, k=6), seed=seed)
        for its in (0, 2):
            f = rsvd(s.A, SketchConfig(k=6, its=its, seed=seed))
            err = diffsnorm(s.A, f, its=20, seed=seed).value
            assert err >= s.sigma[6] - 1e-10
            exact = spectral_norm(s.A - (f.U * f.S) @ f.V.T)
            assert exact >= s.sigma[6] - 1e-10
            assert err <= exact * (1 + 1e-6)


def test_optimal_bound_holds_for_all_distributions():
    for dist in ("inv-j", "step", "exp-decay", "linear", "gaussian-abs"):
        s = synth(SpectrumSpec(dist=dist, m=50, n=40, k=5), seed=11)
        f = rsvd(s.A, SketchConfig(k=5, seed=2))
        exact = spectral_norm(s.A - (f.U * f.S) @ f.V.T)
        assert exact >= s.sigma[5] - 1e-10, dist


def test_centered_discrepancy_uses_means(rng):
    A = rng.standard_normal((40, 3)) @ rng.standard_normal((3, 20)) + 7.0
    f = rpca(A, SketchConfig(k=3, seed=0))
    assert diffsnorm(A, f, its=20).value <= 1e-10 * spectral_norm(A)
    uncentered = f.model_copy(update={"mean": None})
    assert diffsnorm(A, uncentered, its=20).value > 1.0


def test_eig_discrepancy(rng):
    G = rng.standard_normal((20, 20))
    A = G + G.T
    lam, W = np.linalg.eigh(A)
    idx = np.argsort(-np.abs(lam))
    f = EigenApprox(U=W[:, idx[:4]], lam=lam[idx[:4]])
    est = diffsnorm_eig(A, f, its=50, seed=1).value
    assert est <= abs(lam[idx[4]]) * (1 + 1e-10)
    assert est >= abs(lam[idx[4]]) / 2


def test_fro_discrepancy_matches_dense(rng):
    A = rng.standard_normal((30, 12))
    f = rsvd(A, SketchConfig(k=4, seed=3))
    expected = np.linalg.norm(A - (f.U * f.S) @ f.V.T)
    assert fro_discrepancy(A, f) == pytest.approx(expected, rel=1e-8)
    tail = singular_values(A)[4:]
    assert fro_discrepancy(A, f) >= np.sqrt(tail @ tail) * (1 - 1e-10)


@pytest.mark.parametrize("family", ["uniform-centered", "gaussian"])
def test_factor_two_bound_on_centered_random_matrices(family):
    # centered entries have no dominant singular value, so 20 steps only
    # promise the factor-two bound here
    for seed in range(100):
        gen = np.random.default_rng(seed)
        if family == "gaussian":
            A = gen.standard_normal((100, 100))
        else:
            A = gen.uniform(-1.0, 1.0, size=(100, 100))
        exact = spectral_norm(A)
        est = snorm(A, its=20, seed=seed).value
        assert exact / 2 <= est <= exact * (1 + 1e-10), seed


def test_rectangular_random_matrices_with_many_iterations():
    within_one_percent = 0
    for seed in range(100):
        A = np.random.default_rng(seed).uniform(0.0, 1.0, size=(80, 60))
        exact = spectral_norm(A)
        est = snorm(A, its=100, seed=seed).value
        assert exact / 2 <= est <= exact * (1 + 1e-10), seed
        if est >= 0.99 * exact:
            within_one_percent += 1
    assert within_one_percent >= 95


def test_tolerance_stops_once_the_estimate_settles():
    A = np.diag([3.0, 1.0])
    est = snorm(A, its=500, seed=0, tol=1e-13)
    assert est.its_used < 500
    assert est.value == pytest.approx(3.0, rel=1e-12)


def test_zero_tolerance_runs_every_iteration(rng):
    A = rng.standard_normal((20, 10))
    est = snorm(A, its=7, seed=4)
    assert est.its_used == 7
    assert snorm(A, its=7, seed=4, tol=0.0).value == est.value


def test_negative_tolerance_is_rejected(rng):
    with pytest.raises(ConfigError):
        snorm(rng.standard_normal((3, 3)), its=5, tol=-1e-3)


def test_converged_error_respects_optimal_value_for_every_distribution():
    for dist in ("inv-j", "step", "exp-decay", "exp-decay-cut", "linear", "gaussian-abs"):
        s = synth(SpectrumSpec(dist=dist, m=60, n=50, k=8), seed=5)
        for over in (2, 32):
            f = rsvd(s.A, SketchConfig(k=8, l=8 + over, seed=5))
            err = diffsnorm(s.A, f, its=2000, seed=1, tol=1e-13).value
            assert err >= s.sigma[8] - 1e-10, (dist, over)


def test_hard_diagonal_discrepancy_vanishes():
    op = propack_hard_diag(30, "30-case")
    d = op.matrix.diagonal()
    exact = LowRankSVD(U=np.eye(30)[:, :20], S=d[:20].copy(), V=np.eye(30)[:, :20])
    assert diffsnorm(op, exact, its=20, seed=0).value <= 1e-10
    f = rsvd(op, SketchConfig(k=20, seed=3))
    assert diffsnorm(op, f, its=20, seed=0).value <= 1e-10
