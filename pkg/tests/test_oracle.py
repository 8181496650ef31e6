import numpy as np
import pytest

from betaland.constraint import infeasibility, infeasibility_grad
from betaland.geometry import grad_unconstrained, project_tangent
from betaland.oracle import (
    IllConditionedError,
    eigen_reference,
    fd_directional,
    gradient_via_gram,
    projection_via_lsq,
    relative_error,
)

from conftest import random_point, random_skew, random_stiefel, random_sym


class TestFiniteDifferences:
    def test_linear_exact(self, rng):
        C = rng.standard_normal((4, 2))
        X, xi = rng.standard_normal((2, 4, 2))
        fd = fd_directional(lambda Y: np.sum(C * Y), X, xi)
        assert fd == pytest.approx(np.sum(C * xi), rel=1e-9)

    def test_infeasibility(self, rng):
        X, xi = rng.standard_normal((2, 5, 2))
        exact = np.sum(infeasibility_grad(X) * xi)
        assert relative_error(fd_directional(infeasibility, X, xi), exact) <= 1e-6

    def test_second_order(self, rng):
        X, xi = rng.standard_normal((2, 4, 3))
        A = random_sym(rng, 4)

        def cubic(Y):
            return np.sum(Y * (A @ Y)) * np.sum(Y)

        exact = fd_directional(cubic, X, xi, step=1e-5)
        e1 = abs(fd_directional(cubic, X, xi, step=1e-2) - exact)
        e2 = abs(fd_directional(cubic, X, xi, step=5e-3) - exact)
        assert 3.5 < e1 / e2 < 4.5

    def test_rejects_nonpositive_step(self, rng):
        with pytest.raises(ValueError):
            fd_directional(np.sum, np.ones((2, 1)), np.ones((2, 1)), step=0.0)


class TestGradientViaGram:
    def test_euclidean_identity(self, rng):
        X = random_stiefel(rng, 5, 2)
        E = rng.standard_normal((5, 2))
        np.testing.assert_allclose(gradient_via_gram(X, 1.0, E), E, atol=1e-13)

    def test_scalar(self):
        np.testing.assert_allclose(gradient_via_gram([[2.0]], 0.5, [[1.0]]), [[8.0]], rtol=1e-14)

    def test_matches_closed_form(self, rng):
        X = random_point(rng, 5, 2)
        E = rng.standard_normal((5, 2))
        assert relative_error(gradient_via_gram(X, 0.3, E), grad_unconstrained(X, 0.3, E)) <= 1e-8

    def test_rejects_ill_conditioned(self, rng):
        X = random_stiefel(rng, 5, 2) * np.array([1.0, 1e-6])
        with pytest.raises(IllConditionedError):
            gradient_via_gram(X, 1.0, np.ones((5, 2)))


class TestProjectionViaLsq:
    def test_tangent_fixed(self, rng):
        X = random_point(rng, 5, 2)
        Z = random_skew(rng, 5) @ X
        assert relative_error(projection_via_lsq(X, 0.5, Z), Z) <= 1e-10

    def test_normal_killed(self, rng):
        X = random_point(rng, 5, 2)
        Z = X @ np.linalg.solve(X.T @ X, random_sym(rng, 2))
        assert np.linalg.norm(projection_via_lsq(X, 0.5, Z)) <= 1e-10 * np.linalg.norm(Z)

    def test_beta_family(self, rng):
        X = random_point(rng, 7, 3)
        Z = rng.standard_normal((7, 3))
        results = [projection_via_lsq(X, b, Z) for b in (0.1, 0.5, 1.0, 5.0)]
        for r in results:
            assert relative_error(r, results[0]) <= 1e-8
            assert relative_error(r, project_tangent(X, Z)) <= 1e-8

    def test_empty_tangent_space(self):
        np.testing.assert_array_equal(projection_via_lsq([[2.0]], 0.5, [[3.0]]), [[0.0]])


class TestEigenReference:
    def test_diagonal(self):
        value, V = eigen_reference(np.diag(np.arange(1.0, 11.0)), 3)
        assert value == pytest.approx(6.0)
        # span of the first three coordinate vectors
        np.testing.assert_allclose(np.abs(V[3:]), 0, atol=1e-14)
        np.testing.assert_allclose(V.T @ V, np.eye(3), atol=1e-14)

    def test_identity(self):
        value, V = eigen_reference(np.eye(6), 2)
        assert value == pytest.approx(2.0)
        np.testing.assert_allclose(V.T @ V, np.eye(2), atol=1e-14)

    def test_invariant_subspace(self, rng):
        A = random_sym(rng, 12)
        _, V = eigen_reference(A, 4)
        assert np.linalg.norm(A @ V - V @ (V.T @ A @ V)) <= 1e-10
