import numpy as np
import pytest

from betaland.constraint import constraint_residual
from betaland.geometry import grad_constrained
from betaland.landing import LandingConfig, solve
from betaland.oracle import eigen_reference, fd_directional, relative_error
from betaland.problems import (
    constant,
    load_matrix,
    procrustes,
    procrustes_optimum,
    random_instance,
    rayleigh,
    rayleigh_optimum,
)

from conftest import random_point, random_stiefel, random_sym


def _fd_check(objective, rng, probes=20):
    for _ in range(probes):
        X = rng.standard_normal((objective.n, objective.p))
        xi = rng.standard_normal(X.shape)
        fd = fd_directional(objective.fun, X, xi)
        assert relative_error(fd, np.sum(objective.grad(X) * xi)) <= 1e-6


class TestRayleigh:
    def test_diagonal_optimum(self):
        assert rayleigh_optimum(np.diag(np.arange(1.0, 11.0)), 3) == pytest.approx(6.0)

    def test_eigenvectors_are_stationary(self):
        A = np.diag(np.arange(1.0, 8.0))
        X = np.eye(7)[:, [4, 1, 6]]
        np.testing.assert_allclose(grad_constrained(X, 1.0, rayleigh(A, 3).grad(X)), 0, atol=1e-14)

    def test_optimum_matches_eigensolver(self, rng):
        A = random_sym(rng, 20)
        w = np.linalg.eigvalsh(A)
        assert rayleigh_optimum(A, 5) == pytest.approx(np.sum(w[:5]), abs=1e-10)

    def test_rejects_nonsymmetric(self, rng):
        with pytest.raises(ValueError, match="symmetric"):
            rayleigh(rng.standard_normal((4, 4)), 2)

    def test_gradient(self, rng):
        _fd_check(rayleigh(random_sym(rng, 8), 3), rng)


class TestProcrustes:
    def test_zero_at_target(self, rng):
        A = rng.standard_normal((7, 5))
        X = random_stiefel(rng, 5, 2)
        assert procrustes(A, A @ X).fun(X) == pytest.approx(0.0, abs=1e-25)

    def test_polar_factor_optimum(self, rng):
        B = rng.standard_normal((6, 6))
        U, s, Vt = np.linalg.svd(B)
        polar = U @ Vt
        f = procrustes(np.eye(6), B)
        expected = 0.5 * (6 + np.sum(B * B)) - np.sum(s)
        assert f.fun(polar) == pytest.approx(expected, rel=1e-12)
        assert procrustes_optimum(np.eye(6), B) == pytest.approx(expected, rel=1e-12)
        for _ in range(20):
            assert f.fun(random_stiefel(rng, 6, 6)) >= expected - 1e-12

    def test_shape_mismatch(self, rng):
        with pytest.raises(ValueError):
            procrustes(np.ones((4, 3)), np.ones((5, 2)))

    def test_gradient(self, rng):
        _fd_check(procrustes(rng.standard_normal((9, 6)), rng.standard_normal((9, 3))), rng)


def test_constant_objective():
    f = constant(3, 2, 1.5)
    assert f.fun(np.ones((3, 2))) == 1.5
    np.testing.assert_array_equal(f.grad(np.ones((3, 2))), 0)


class TestRandomInstance:
    @pytest.mark.parametrize("kind", ["rayleigh", "procrustes"])
    def test_deterministic(self, kind):
        a = random_instance(kind, 12, 4, seed=3, delta=0.4)
        b = random_instance(kind, 12, 4, seed=3, delta=0.4)
        assert a.X0.tobytes() == b.X0.tobytes()
        for key, value in a.objective.params.items():
            assert value.tobytes() == b.objective.params[key].tobytes()
        assert a.optimum == b.optimum

    def test_feasible_start(self):
        inst = random_instance("rayleigh", 10, 3, seed=1, delta=0.0)
        assert np.linalg.norm(constraint_residual(inst.X0)) <= 1e-12

    def test_offset_spread(self):
        norms = [np.linalg.norm(constraint_residual(random_instance("rayleigh", 10, 3, s, 0.5).X0))
                 for s in range(100)]
        assert min(norms) >= 0.25 and max(norms) <= 1.0
        # the construction puts ‖h(X0)‖ at delta itself
        np.testing.assert_allclose(norms, 0.5, atol=1e-12)

    def test_optimum_oracle(self):
        inst = random_instance("rayleigh", 20, 5, seed=7)
        value, _ = eigen_reference(inst.objective.params["A"], 5)
        assert inst.optimum == pytest.approx(value, abs=1e-10)

    def test_invalid(self):
        with pytest.raises(ValueError, match="p <= n"):
            random_instance("rayleigh", 3, 5, 0)
        with pytest.raises(ValueError):
            random_instance("bogus", 5, 2, 0)
        with pytest.raises(ValueError):
            random_instance("rayleigh", 5, 2, 0, delta=1.5)


def test_shipped_objectives_fd_invariant(rng):
    """Step 1e-6·(1+‖X‖), 100 probes across both objectives."""
    for seed in range(50):
        for kind in ("rayleigh", "procrustes"):
            f = random_instance(kind, 8, 3, seed).objective
            X = random_point(rng, 8, 3)
            xi = rng.standard_normal(X.shape)
            assert relative_error(fd_directional(f.fun, X, xi), np.sum(f.grad(X) * xi)) <= 1e-6


@pytest.mark.slow
def test_rayleigh_multistart():
    """≥ 18 of 20 seeded starts reach the eigenvalue optimum; all land on the manifold."""
    for beta in (0.5, 1.0):
        hits = 0
        for seed in range(20):
            inst = random_instance("rayleigh", 20, 5, seed=seed, delta=0.5)
            result = solve(inst.objective, inst.X0, LandingConfig(beta=beta))
            last = result.trace[-1]
            assert last.h_norm <= 1e-8
            hits += abs(last.f_value - inst.optimum) <= 1e-6
        assert hits >= 18


def test_load_matrix(tmp_path):
    path = tmp_path / "a.csv"
    path.write_text("1,2,3\n4.5,-6,7e-1\n")
    np.testing.assert_array_equal(load_matrix(path), [[1, 2, 3], [4.5, -6, 0.7]])
    row = tmp_path / "row.csv"
    row.write_text("1,2\n")
    assert load_matrix(row).shape == (1, 2)
    with pytest.raises(ValueError):
        load_matrix(tmp_path / "missing.csv")
    bad = tmp_path / "bad.csv"
    bad.write_text("1,x\n")
    with pytest.raises(ValueError):
        load_matrix(bad)
