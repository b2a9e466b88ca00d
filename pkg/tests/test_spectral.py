import numpy as np
import pytest

from algset.basis import build_basis
from algset.moments import MomentMatrix, empirical_moment_matrix
from algset.spectral import (
    SpectralDecomposition,
    default_cutoff,
    eig_sym,
    eigengap_diagnostic,
    extract_kernel,
    jacobi_eigh,
    subspace_distance,
)

CIRCLE = np.array([-1.0, 0, 0, 0, 1, 1]) / np.sqrt(3)


def test_identity():
    dec = eig_sym(np.eye(6))
    np.testing.assert_allclose(dec.eigenvalues, np.ones(6))


def test_diagonal():
    dec = eig_sym(np.diag([3.0, 1.0, 2.0]))
    np.testing.assert_allclose(dec.eigenvalues, [1, 2, 3])
    np.testing.assert_allclose(dec.eigenvectors, np.eye(3)[:, [1, 2, 0]])


def test_two_by_two():
    dec = eig_sym(np.array([[2.0, 1.0], [1.0, 2.0]]))
    np.testing.assert_allclose(dec.eigenvalues, [1, 3], atol=1e-14)
    s = 1 / np.sqrt(2)
    np.testing.assert_allclose(np.abs(dec.eigenvectors), [[s, s], [s, s]], atol=1e-14)
    assert abs(dec.eigenvectors[:, 1] @ np.array([s, s])) == pytest.approx(1.0)
    assert abs(dec.eigenvectors[:, 0] @ np.array([s, -s])) == pytest.approx(1.0)


def test_sign_convention(rng):
    a = rng.normal(size=(8, 8))
    dec = eig_sym(a + a.T)
    for k in range(8):
        col = dec.eigenvectors[:, k]
        assert col[np.argmax(np.abs(col))] > 0


def test_matches_numpy(rng):
    for size in (2, 5, 15, 28):
        a = rng.normal(size=(size, size))
        a = a + a.T
        dec = eig_sym(a)
        np.testing.assert_allclose(dec.eigenvalues, np.linalg.eigvalsh(a), atol=1e-10 * np.abs(a).max())
        u = dec.eigenvectors
        assert np.max(np.abs(u.T @ u - np.eye(size))) <= 1e-10
        assert np.linalg.norm(a - dec.reconstruct()) <= 1e-8 * max(1.0, np.linalg.norm(a))
        assert np.all(np.diff(dec.eigenvalues) >= 0)


def test_deterministic(rng):
    a = rng.normal(size=(10, 10))
    a = a + a.T
    d1, d2 = eig_sym(a), eig_sym(a.copy())
    np.testing.assert_array_equal(d1.eigenvalues, d2.eigenvalues)
    np.testing.assert_array_equal(d1.eigenvectors, d2.eigenvectors)


def test_accepts_moment_matrix_and_symmetrizes():
    b = build_basis(1, 1)
    m = MomentMatrix(b, np.array([[2.0, 1.0], [1.0, 2.0]]), "empirical")
    np.testing.assert_allclose(eig_sym(m).eigenvalues, [1, 3])
    np.testing.assert_allclose(eig_sym(np.array([[2.0, 1.5], [0.5, 2.0]])).eigenvalues, [1, 3])


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        eig_sym(np.array([[1.0, np.nan], [np.nan, 1.0]]))
    with pytest.raises(ValueError):
        eig_sym(np.ones((2, 3)))


def test_jacobi_repeated_eigenvalues():
    q, _ = np.linalg.qr(np.random.default_rng(1).normal(size=(6, 6)))
    a = q @ np.diag([1, 1, 1, 2, 2, 5.0]) @ q.T
    w, v, _ = jacobi_eigh(a)
    np.testing.assert_allclose(np.sort(w), [1, 1, 1, 2, 2, 5], atol=1e-12)


def test_extract_kernel_examples():
    dec = SpectralDecomposition(np.array([1e-6, 0.5, 2.0]), np.eye(3))
    k = extract_kernel(dec, 0.01)
    assert k.k_hat == 1
    assert k.vectors.shape == (3, 1)
    assert k.eigengap == pytest.approx(0.5 - 1e-6)
    empty = extract_kernel(dec, 1e-9)
    assert empty.k_hat == 0 and empty.vectors.shape == (3, 0) and empty.eigengap is None
    every = extract_kernel(dec, 10.0)
    assert every.k_hat == 3 and every.eigengap is None
    with pytest.raises(ValueError):
        extract_kernel(dec, 0.0)


def test_exact_circle_kernel():
    t = 2 * np.pi * np.arange(30) / 30
    m = empirical_moment_matrix(build_basis(2, 2), np.column_stack([np.cos(t), np.sin(t)]))
    k = extract_kernel(eig_sym(m), 1e-6)
    assert k.k_hat == 1
    assert abs(k.vectors[:, 0] @ CIRCLE) >= 1 - 1e-8


def test_default_cutoff():
    assert default_cutoff(10000) == pytest.approx(0.1)
    assert default_cutoff(16) == pytest.approx(0.5)
    assert default_cutoff(600) == pytest.approx(600 ** -0.25)
    assert default_cutoff(600) == pytest.approx(0.2021, abs=1e-4)
    assert default_cutoff(16, 2.0) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        default_cutoff(1)


def test_subspace_distance_examples():
    e1, e2 = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    assert subspace_distance(e1, e1) == 0.0
    assert subspace_distance(e1, e2) == pytest.approx(np.sqrt(2))
    assert subspace_distance(e1, (e1 + e2) / np.sqrt(2)) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        subspace_distance(np.array([1.0, 1.0]), e1)


def test_subspace_distance_sign_and_basis_invariant(rng):
    q, _ = np.linalg.qr(rng.normal(size=(6, 2)))
    rot = np.array([[0.6, -0.8], [0.8, 0.6]])
    assert subspace_distance(q, -(q @ rot)) == pytest.approx(0.0, abs=1e-12)
    p, _ = np.linalg.qr(rng.normal(size=(6, 3)))
    assert subspace_distance(q, p) == pytest.approx(subspace_distance(p, q))


def test_eigengap_diagnostic():
    out = eigengap_diagnostic([0.001, 0.002, 0.9, 1.0])
    assert out["k"] == 2
    assert out["relative_gap"] == pytest.approx(0.898)
