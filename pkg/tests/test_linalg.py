import numpy as np
import pytest

from tensorlob.linalg import (
    NumericError,
    orthonormalize,
    regularized_ratio_eig,
    ridge_solve,
    sym_eig,
)


def random_spd(rng, n, scale=1.0):
    a = rng.standard_normal((n, n))
    return scale * (a @ a.T) / n + 1e-3 * np.eye(n)


def subspace_projector(v):
    q = orthonormalize(v)
    return q @ q.T


class TestSymEig:
    def test_identity(self):
        pairs = sym_eig(np.eye(3))
        assert np.allclose(pairs.values, 1.0)

    def test_diagonal(self):
        pairs = sym_eig(np.diag([5.0, 2.0, 1.0]))
        assert np.allclose(pairs.values, [5.0, 2.0, 1.0])
        assert np.allclose(np.abs(pairs.vectors), np.eye(3))

    def test_reconstruction(self):
        rng = np.random.default_rng(0)
        a = rng.standard_normal((6, 6))
        a = (a + a.T) / 2
        pairs = sym_eig(a)
        recon = pairs.vectors @ np.diag(pairs.values) @ pairs.vectors.T
        assert np.max(np.abs(recon - a)) < 1e-8

    def test_reconstruction_large(self):
        rng = np.random.default_rng(1)
        for n in (40, 150):
            a = rng.standard_normal((n, n))
            a = (a + a.T) / 2
            pairs = sym_eig(a)
            recon = pairs.vectors @ np.diag(pairs.values) @ pairs.vectors.T
            assert np.max(np.abs(recon - a)) < 1e-8
            assert np.max(np.abs(pairs.vectors.T @ pairs.vectors - np.eye(n))) < 1e-10

    def test_values_descending(self):
        rng = np.random.default_rng(2)
        a = rng.standard_normal((8, 8))
        a = (a + a.T) / 2
        values = sym_eig(a).values
        assert np.all(np.diff(values) <= 0)

    def test_rejects_asymmetric(self):
        a = np.array([[1.0, 2.0], [0.0, 1.0]])
        with pytest.raises(ValueError):
            sym_eig(a)

    def test_rejects_nonsquare(self):
        with pytest.raises(ValueError):
            sym_eig(np.zeros((2, 3)))


class TestRegularizedRatioEig:
    def test_sw_identity_reduces_to_sym_eig(self):
        rng = np.random.default_rng(3)
        sb = random_spd(rng, 5)
        v = regularized_ratio_eig(sb, np.eye(5), 0.0, 3)
        expected = sym_eig(sb).vectors[:, :3]
        # same subspace regardless of basis normalization
        assert np.allclose(subspace_projector(v), subspace_projector(expected), atol=1e-10)

    def test_degenerate_spectrum(self):
        v = regularized_ratio_eig(np.eye(4), np.eye(4), 0.0, 2)
        q = orthonormalize(v)
        assert np.allclose(q.T @ q, np.eye(2), atol=1e-10)

    def test_top_vector_maximizes_rayleigh_ratio(self):
        rng = np.random.default_rng(4)
        sb = random_spd(rng, 6)
        sw = random_spd(rng, 6)
        lam = 0.05
        v = regularized_ratio_eig(sb, sw, lam, 1)[:, 0]
        shifted = sw + lam * np.eye(6)

        def ratio(x):
            return (x @ sb @ x) / (x @ shifted @ x)

        best = ratio(v)
        samples = rng.standard_normal((100_000, 6))
        samples /= np.linalg.norm(samples, axis=1, keepdims=True)
        random_best = max(ratio(x) for x in samples)
        assert best >= random_best - 1e-6

    def test_scaling_sb_leaves_subspace_unchanged(self):
        rng = np.random.default_rng(5)
        sb = random_spd(rng, 7)
        sw = random_spd(rng, 7)
        v1 = regularized_ratio_eig(sb, sw, 0.1, 3)
        v2 = regularized_ratio_eig(4.0 * sb, sw, 0.1, 3)
        assert np.allclose(subspace_projector(v1), subspace_projector(v2), atol=1e-8)

    def test_not_positive_definite(self):
        sw = -np.eye(3)
        with pytest.raises(NumericError, match="lambda"):
            regularized_ratio_eig(np.eye(3), sw, 0.0, 1)

    def test_generalized_eigen_residual(self):
        rng = np.random.default_rng(6)
        sb = random_spd(rng, 5)
        sw = random_spd(rng, 5)
        lam = 0.2
        v = regularized_ratio_eig(sb, sw, lam, 5)
        shifted = sw + lam * np.eye(5)
        m = np.linalg.solve(shifted, sb)
        # each returned column is an eigenvector of (sw + lam I)^{-1} sb
        for j in range(5):
            col = v[:, j]
            mv = m @ col
            mu = (col @ mv) / (col @ col)
            assert np.linalg.norm(mv - mu * col) < 1e-8 * max(1.0, abs(mu))


class TestRidgeSolve:
    def test_identity_small_lambda(self):
        b = np.array([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]])
        x = ridge_solve(np.eye(3), b, 1e-12)
        assert np.allclose(x, b, atol=1e-9)

    def test_tiny_ridge_limit_matches_inverse(self):
        rng = np.random.default_rng(7)
        a = rng.standard_normal((4, 4)) + 4 * np.eye(4)
        b = rng.standard_normal((4, 2))
        x = ridge_solve(a, b, 1e-12)
        assert np.allclose(x, np.linalg.solve(a, b), atol=1e-6)

    def test_stationarity(self):
        rng = np.random.default_rng(8)
        a = rng.standard_normal((10, 4))
        b = rng.standard_normal((10, 3))
        lam = 0.1
        x = ridge_solve(a, b, lam)
        grad = 2 * (a.T @ (a @ x - b)) + 2 * lam * x
        assert np.max(np.abs(grad)) < 1e-8

    def test_residual_bound(self):
        rng = np.random.default_rng(9)
        a = rng.standard_normal((12, 5))
        b = rng.standard_normal((12,))
        lam = 0.5
        x = ridge_solve(a, b, lam)
        lhs = (a.T @ a + lam * np.eye(5)) @ x
        rhs = a.T @ b
        assert np.linalg.norm(lhs - rhs) <= 1e-8 * np.linalg.norm(rhs)

    def test_unique_minimizer(self):
        rng = np.random.default_rng(10)
        a = rng.standard_normal((8, 4))
        b = rng.standard_normal((8,))
        lam = 0.3
        x = ridge_solve(a, b, lam)

        def objective(z):
            return np.sum((a @ z - b) ** 2) + lam * np.sum(z**2)

        base = objective(x)
        for _ in range(20):
            delta = rng.standard_normal(4)
            delta *= 1e-3 / np.linalg.norm(delta)
            assert objective(x + delta) > base

    def test_requires_positive_lambda(self):
        with pytest.raises(ValueError):
            ridge_solve(np.eye(2), np.ones(2), 0.0)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            ridge_solve(np.zeros((3, 2)), np.zeros(4), 1.0)


class TestOrthonormalize:
    def test_orthonormal_input_up_to_sign(self):
        rng = np.random.default_rng(11)
        q0 = np.linalg.qr(rng.standard_normal((6, 3)))[0]
        q = orthonormalize(q0)
        assert np.allclose(np.abs(q.T @ q0), np.eye(3), atol=1e-12)

    def test_single_column(self):
        v = np.array([[3.0], [4.0]])
        q = orthonormalize(v)
        assert np.allclose(q, [[0.6], [0.8]])

    def test_random_8x3(self):
        rng = np.random.default_rng(12)
        q = orthonormalize(rng.standard_normal((8, 3)))
        assert np.max(np.abs(q.T @ q - np.eye(3))) <= 1e-10

    def test_span_preserved(self):
        rng = np.random.default_rng(13)
        m = rng.standard_normal((7, 3))
        q = orthonormalize(m)
        # every original column lies in span(q)
        assert np.allclose(q @ (q.T @ m), m, atol=1e-10)

    def test_rank_deficient(self):
        m = np.ones((4, 2))
        with pytest.raises(NumericError):
            orthonormalize(m)
