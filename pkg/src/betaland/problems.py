"""Test objectives with known optima and seeded instance generation."""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from ._validation import check_matrix, sigma_ratio

__all__ = [
    "Objective",
    "ProblemInstance",
    "rayleigh",
    "procrustes",
    "constant",
    "random_instance",
    "initial_point",
    "load_matrix",
    "rayleigh_optimum",
    "procrustes_optimum",
]


@dataclass(frozen=True)
class Objective:
    """A smooth cost ``fun(X)`` on n×p matrices and its Euclidean gradient ``grad(X)``."""

    name: str
    n: int
    p: int
    fun: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray]
    params: dict = field(default_factory=dict, compare=False, repr=False)

    def __call__(self, X):
        return self.fun(X)


@dataclass(frozen=True)
class ProblemInstance:
    objective: Objective
    X0: np.ndarray
    seed: int
    optimum: Optional[float] = None
    optimum_source: Optional[str] = None


def rayleigh(A, p):
    """``f(X) = tr(XᵀAX)``, ``∇f(X) = 2AX``.

    Over the Stiefel manifold the minimum is the sum of the ``p`` smallest
    eigenvalues of ``A``.
    """
    A = check_matrix(A, "A")
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError(f"A must be square, got shape {A.shape}")
    if not np.allclose(A, A.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(A).max())):
        raise ValueError("A must be symmetric")
    if not 1 <= p <= n:
        raise ValueError(f"p must satisfy p <= n (got n={n}, p={p})")
    A = 0.5 * (A + A.T)
    A.setflags(write=False)

    def fun(X):
        return float(np.sum(X * (A @ X)))

    def grad(X):
        return 2.0 * (A @ X)

    return Objective("rayleigh", n, p, fun, grad, {"A": A})


def procrustes(A, B):
    """``f(X) = ½‖AX − B‖²`` with ``A`` m×n and ``B`` m×p; ``∇f(X) = Aᵀ(AX − B)``."""
    A = check_matrix(A, "A")
    B = check_matrix(B, "B")
    m, n = A.shape
    if B.shape[0] != m:
        raise ValueError(f"A has {m} rows but B has {B.shape[0]}")
    p = B.shape[1]
    if p > n:
        raise ValueError(f"p must satisfy p <= n (got n={n}, p={p})")
    A.setflags(write=False)
    B.setflags(write=False)

    def fun(X):
        R = A @ X - B
        return 0.5 * float(np.sum(R * R))

    def grad(X):
        return A.T @ (A @ X - B)

    return Objective("procrustes", n, p, fun, grad, {"A": A, "B": B})


def constant(n, p, value=0.0):
    """``f ≡ value``; isolates the normal term of the landing step."""
    value = float(value)
    return Objective("constant", n, p, lambda X: value, lambda X: np.zeros((n, p)))


def rayleigh_optimum(A, p):
    """Sum of the ``p`` smallest eigenvalues of symmetric ``A``."""
    w = scipy.linalg.eigh(A, eigvals_only=True, subset_by_index=[0, p - 1])
    return float(np.sum(w))


def procrustes_optimum(A, B):
    """Stiefel minimum of ``½‖AX − B‖²`` when ``A`` has orthonormal columns.

    Then ``f(X) = ½(p + ‖B‖²) − ⟨AᵀB, X⟩`` on the manifold and the inner
    product is maximised by the polar factor of ``AᵀB``.
    """
    C = A.T @ B
    nuclear = np.sum(np.linalg.svd(C, compute_uv=False))
    return float(0.5 * (B.shape[1] + np.sum(B * B)) - nuclear)


def _random_full_rank(rng, n, p, min_ratio=1e-6):
    while True:
        X = rng.standard_normal((n, p))
        if sigma_ratio(X) >= min_ratio:
            return X


def random_rayleigh_matrix(rng, n):
    """Symmetric matrix with eigenvalues ``1/4, 2/4, ..., n/4`` in a random orthonormal basis."""
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    A = (Q * (np.arange(1.0, n + 1.0) / 4.0)) @ Q.T
    return 0.5 * (A + A.T)


def initial_point(rng, n, p, delta=0.0):
    """Random start ``Q (I + delta·D)^{1/2}``.

    ``Q`` orthonormalizes a standard normal draw and ``D`` is a random
    diagonal with unit Frobenius norm, so ``h(X0) = delta·D`` and
    ``‖h(X0)‖ = delta`` up to rounding. ``delta = 0`` gives a feasible start.
    """
    if not 1 <= p <= n:
        raise ValueError(f"p must satisfy p <= n (got n={n}, p={p})")
    delta = float(delta)
    if not 0.0 <= delta < 1.0:
        raise ValueError(f"delta must lie in [0, 1), got {delta}")
    Q, _ = np.linalg.qr(_random_full_rank(rng, n, p))
    d = rng.uniform(-1.0, 1.0, size=p)
    d /= np.linalg.norm(d)
    return Q * np.sqrt(1.0 + delta * d)


def random_instance(kind, n, p, seed, delta=0.0):
    """Seeded problem instance; the start comes from :func:`initial_point`."""
    if not 1 <= p <= n:
        raise ValueError(f"p must satisfy p <= n (got n={n}, p={p})")
    rng = np.random.default_rng(seed)

    if kind == "rayleigh":
        A = random_rayleigh_matrix(rng, n)
        objective = rayleigh(A, p)
        optimum = rayleigh_optimum(objective.params["A"], p)
        source = "dense symmetric eigendecomposition"
    elif kind == "procrustes":
        A, _ = np.linalg.qr(rng.standard_normal((n, n)))
        B = rng.standard_normal((n, p))
        objective = procrustes(A, B)
        optimum = procrustes_optimum(A, B)
        source = "nuclear norm of AᵀB (orthogonal A)"
    else:
        raise ValueError(f"unknown problem kind {kind!r}")

    X0 = initial_point(rng, n, p, delta)
    return ProblemInstance(objective, X0, seed, optimum, source)


def load_matrix(path):
    """Read a headerless, comma-separated matrix of decimal numbers."""
    try:
        M = np.loadtxt(path, delimiter=",", ndmin=2, dtype=np.float64)
    except (OSError, ValueError) as exc:
        raise ValueError(f"cannot read matrix from {path}: {exc}") from exc
    return check_matrix(M, str(path))
