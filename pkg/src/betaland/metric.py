"""The β-metric on the Stiefel manifold and its extension to full-rank matrices.

For full-rank ``X`` and ``β > 0`` the ambient metric is::

    g(ξ, ζ) = ⟨ξ, (I − (1−β) X (XᵀX)⁻¹ Xᵀ) ζ (XᵀX)⁻¹⟩

β = 1 gives the Euclidean metric on the Stiefel manifold and β = 1/2 the
canonical one. :func:`metric_eval` is the production path; the decomposed and
Gram forms exist so the three can be checked against one another.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import (
    DEFAULT_RANK_FLOOR,
    check_beta,
    check_matrix,
    check_point,
    check_shape,
    gram_factor,
    gram_solve,
    sym,
)

__all__ = [
    "TangentDecomposition",
    "metric_eval",
    "metric_eval_stiefel",
    "decompose",
    "metric_eval_decomposed",
    "gram_matrix",
    "vec",
    "unvec",
]


def vec(M):
    """Column-major vectorization."""
    return np.asarray(M).ravel(order="F")


def unvec(v, shape):
    return np.asarray(v).reshape(shape, order="F")


def _apply_metric(X, beta, factor, zeta):
    """(I − (1−β) X (XᵀX)⁻¹ Xᵀ) ζ (XᵀX)⁻¹ without any n×n matrix."""
    M = zeta - (1.0 - beta) * (X @ gram_solve(factor, X.T @ zeta))
    return gram_solve(factor, M.T).T


def metric_eval(X, beta, xi, zeta, rank_floor=DEFAULT_RANK_FLOOR):
    """β-metric ``g_X(xi, zeta)`` at a full-rank point ``X``."""
    X = check_point(X, rank_floor)
    beta = check_beta(beta)
    xi = check_shape(xi, X.shape, "xi")
    zeta = check_shape(zeta, X.shape, "zeta")
    factor = gram_factor(X)
    return float(np.sum(xi * _apply_metric(X, beta, factor, zeta)))


def metric_eval_stiefel(X, beta, xi, zeta, tol=1e-10):
    """β-metric ``⟨ξ, (I − (1−β) X Xᵀ) ζ⟩`` at a point of the Stiefel manifold.

    Raises ``ValueError`` if ``‖XᵀX − I‖ > tol``.
    """
    X = check_matrix(X, "X")
    beta = check_beta(beta)
    xi = check_shape(xi, X.shape, "xi")
    zeta = check_shape(zeta, X.shape, "zeta")
    p = X.shape[1]
    if p > X.shape[0]:
        raise ValueError("p must satisfy p <= n")
    residual = np.linalg.norm(X.T @ X - np.eye(p))
    if residual > tol:
        raise ValueError(f"X is not on the Stiefel manifold: ‖XᵀX − I‖ = {residual:.3e}")
    return float(np.sum(xi * (zeta - (1.0 - beta) * (X @ (X.T @ zeta)))))


@dataclass(frozen=True)
class TangentDecomposition:
    """Coordinates of ``eta = base @ A + complement @ B``."""

    A: np.ndarray
    B: np.ndarray
    base: np.ndarray
    complement: np.ndarray

    def reconstruct(self):
        return self.base @ self.A + self.complement @ self.B


def decompose(X, X_perp, eta, rank_floor=DEFAULT_RANK_FLOOR):
    """Split ``eta`` along span(X) and an orthonormal complement ``X_perp``.

    ``A = (XᵀX)⁻¹ Xᵀ eta`` and ``B = X_perpᵀ eta``; exact because
    ``Xᵀ X_perp = 0`` and ``X_perpᵀ X_perp = I``.
    """
    X = check_point(X, rank_floor)
    n, p = X.shape
    X_perp = np.asarray(X_perp, dtype=np.float64)
    if X_perp.shape != (n, n - p):
        raise ValueError(f"X_perp has shape {X_perp.shape}, expected {(n, n - p)}")
    eta = check_shape(eta, X.shape, "eta")
    factor = gram_factor(X)
    A = gram_solve(factor, X.T @ eta)
    B = X_perp.T @ eta
    return TangentDecomposition(A=A, B=B, base=X, complement=X_perp)


def metric_eval_decomposed(d_eta, d_xi, beta):
    """β-metric from two decompositions sharing the same base and complement::

        β tr(A_ηᵀ XᵀX A_ξ (XᵀX)⁻¹) + tr(B_ηᵀ X_perpᵀ X_perp B_ξ (XᵀX)⁻¹)
    """
    beta = check_beta(beta)
    same_base = d_eta.base is d_xi.base or np.array_equal(d_eta.base, d_xi.base)
    same_comp = (d_eta.complement is d_xi.complement
                 or np.array_equal(d_eta.complement, d_xi.complement))
    if not (same_base and same_comp):
        raise ValueError("decompositions do not share base point and complement")
    X, X_perp = d_eta.base, d_eta.complement
    G = X.T @ X
    factor = gram_factor(X)
    span_part = np.trace(gram_solve(factor, (d_eta.A.T @ G @ d_xi.A).T).T)
    perp_part = np.trace(
        gram_solve(factor, (d_eta.B.T @ (X_perp.T @ X_perp) @ d_xi.B).T).T)
    return float(beta * span_part + perp_part)


def gram_matrix(X, beta, rank_floor=DEFAULT_RANK_FLOOR):
    """np×np matrix ``G`` with ``vec(ξ)ᵀ G vec(ζ) = g_X(ξ, ζ)`` (column-major vec).

    Equal to ``kron((XᵀX)⁻¹, I − (1−β) X (XᵀX)⁻¹ Xᵀ)``. Dense; meant for
    verification at small sizes.
    """
    X = check_point(X, rank_floor)
    beta = check_beta(beta)
    n, p = X.shape
    factor = gram_factor(X)
    G_inv = sym(gram_solve(factor, np.eye(p)))
    M = np.eye(n) - (1.0 - beta) * (X @ gram_solve(factor, X.T))
    return sym(np.kron(G_inv, sym(M)))
