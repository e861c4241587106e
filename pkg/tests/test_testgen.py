# tests/test_testgen.py

import numpy as np
import pytest

from conftest import singular_values
from randpca.core.exceptions import ConfigError
from randpca.core.models import SpectrumSpec
from randpca.linalg.matop import to_dense
from randpca.linalg.testgen import (
    generate,
    propack_hard_diag,
    psd_with_spectrum,
    random_orthonormal,
    sign_flipped_gaussian,
    spectrum,
    split_shape,
    synth,
)


def test_inverse_j_spectrum():
    s = spectrum(SpectrumSpec(dist=1, m=5, n=4))
    np.testing.assert_allclose(s, [1.0, 0.5, 1 / 3, 0.25])


@pytest.mark.parametrize("dist", [2, 3, 4, 5])
def test_head_and_tail_values(dist):
    s = spectrum(SpectrumSpec(dist=dist, m=100, n=80, k=10))
    assert len(s) == 80
    assert s[0] == pytest.approx(1.0, abs=1e-15)
    assert s[10] == pytest.approx(1e-5, rel=1e-12)
    assert np.all(np.diff(s) <= 1e-18)


def test_step_spectrum():
    s = spectrum(SpectrumSpec(dist="step", m=20, n=20, k=4))
    np.testing.assert_allclose(s[:4], [1.0, 2e-5, 2e-5, 2e-5])
    np.testing.assert_allclose(s[4:6], [1e-5, 1e-5 * 5 / 6])


def test_exp_decay_head_and_cut_tail():
    s = spectrum(SpectrumSpec(dist="exp-decay-cut", m=30, n=30, k=6))
    np.testing.assert_allclose(s[:6], 10.0 ** (-np.arange(6)), rtol=1e-12)
    assert s[6] == 1e-5
    assert np.all(s[7:] == 0.0)


def test_linear_head_ends_at_tail_value():
    s = spectrum(SpectrumSpec(dist="linear", m=30, n=30, k=5))
    assert s[4] == pytest.approx(1e-5, rel=1e-12)
    np.testing.assert_allclose(s[5:7], [1e-5, 1e-5 * np.sqrt(6 / 7)])


def test_gaussian_abs_is_seeded_and_sorted():
    spec = SpectrumSpec(dist="gaussian-abs", m=40, n=30)
    a, b = spectrum(spec, seed=3), spectrum(spec, seed=3)
    np.testing.assert_array_equal(a, b)
    assert np.all(a >= 0) and np.all(np.diff(a) <= 0)


def test_bad_distribution_parameters():
    with pytest.raises(ConfigError):
        SpectrumSpec(dist=7, m=3, n=3)
    with pytest.raises(ConfigError):
        SpectrumSpec(dist="spiky", m=3, n=3)
    with pytest.raises(ConfigError):
        spectrum(SpectrumSpec(dist=3, m=10, n=10, k=10))
    with pytest.raises(ConfigError):
        spectrum(SpectrumSpec(dist=3, m=10, n=10, k=1))


def test_random_orthonormal_columns():
    Q = random_orthonormal(30, 7, seed=1)
    np.testing.assert_allclose(Q.T @ Q, np.eye(7), atol=1e-12)
    np.testing.assert_array_equal(Q, random_orthonormal(30, 7, seed=1))


def test_synth_has_requested_spectrum():
    s = synth(SpectrumSpec(dist=3, m=60, n=40, k=8), seed=5)
    assert s.A.shape == (60, 40)
    np.testing.assert_allclose(singular_values(s.A), s.sigma, rtol=1e-8, atol=1e-14)
    np.testing.assert_allclose(s.A, (s.U * s.sigma) @ s.V.T, atol=1e-13)


def test_synth_is_reproducible():
    spec = SpectrumSpec(dist=1, m=20, n=20)
    np.testing.assert_array_equal(synth(spec, 4).A, synth(spec, 4).A)
    assert not np.array_equal(synth(spec, 4).A, synth(spec, 5).A)


def test_psd_with_spectrum():
    lam = np.array([3.0, 1.0, 0.5, 0.0, 0.0])
    A = to_dense(psd_with_spectrum(5, lam, seed=2))
    np.testing.assert_array_equal(A, A.T)
    np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(A))[::-1], lam, atol=1e-12)
    with pytest.raises(ConfigError):
        psd_with_spectrum(3, np.array([1.0, -1.0, 0.0]), seed=0)


def test_hard_diagonals():
    d = to_dense(propack_hard_diag()).diagonal()
    assert len(d) == 30
    assert list(d[:3]) == [1.0, 1.0, 1.0]
    assert np.all(d[3:20] == 0.999) and np.all(d[20:] == 0.0)
    assert propack_hard_diag(pattern="100-case").shape == (100, 100)
    with pytest.raises(ConfigError):
        propack_hard_diag(10)


def test_sign_flip_pattern():
    A = to_dense(sign_flipped_gaussian(6, seed=0))
    B = np.random.default_rng(0).normal(np.sqrt(30.0 / 6), 1.0, size=(6, 6))
    for i in range(6):
        for j in range(6):
            flipped = (i + 1) * (j + 1) % 2 == 1
            assert A[i, j] == (-B[i, j] if flipped else B[i, j])


def test_generate_dispatch():
    g = generate("3", 30, 20, 5, seed=1)
    assert g.op.shape == (30, 20) and g.label == "exp-decay"
    assert len(g.sigma) == 20
    assert generate("hard30", 0, 0, 0, seed=0).op.shape == (30, 30)
    assert generate("signflip", 0, 12, 4, seed=0).sigma is None
    psd = generate(5, 15, 15, 4, seed=0, psd=True)
    np.testing.assert_array_equal(to_dense(psd.op), to_dense(psd.op).T)
    with pytest.raises(ConfigError):
        generate(5, 15, 10, 4, seed=0, psd=True)


def test_split_shape():
    assert split_shape("300x200") == (300, 200)
    assert split_shape("50") == (50, 50)
    with pytest.raises(ConfigError):
        split_shape("axb")
