"""Orthogonality constraint, infeasibility, and the tangent space of a layer.

A layer through a full-rank ``X`` is the level set ``{Y : YᵀY = XᵀX}`` of the
constraint map. Everything here is independent of the choice of metric.
"""

import numpy as np
import scipy.linalg

from ._validation import (
    DEFAULT_RANK_FLOOR,
    check_matrix,
    check_point,
    check_shape,
    gram_factor,
    gram_solve,
    sym,
)

__all__ = [
    "constraint_residual",
    "infeasibility",
    "infeasibility_grad",
    "normal_term",
    "layer_map",
    "ortho_complement",
    "tangent_basis",
    "tangent_dimension",
    "is_tangent",
]


def constraint_residual(X):
    """XᵀX − I_p, symmetrized so that the result is exactly symmetric."""
    X = check_matrix(X, "X")
    n, p = X.shape
    if p > n:
        raise ValueError(f"p must satisfy p <= n (got n={n}, p={p})")
    return sym(X.T @ X) - np.eye(p)


def infeasibility(X):
    """Half the squared Frobenius norm of the constraint residual."""
    h = constraint_residual(X)
    return 0.5 * float(np.sum(h * h))


def infeasibility_grad(X):
    """Euclidean gradient of :func:`infeasibility`, ``2 X (XᵀX − I)``."""
    X = check_matrix(X, "X")
    return 2.0 * (X @ constraint_residual(X))


def normal_term(X):
    """``X (XᵀX − I)``, the infeasibility-reducing term of a landing step.

    Half of :func:`infeasibility_grad`; the landing step uses this scaling.
    """
    X = check_matrix(X, "X")
    return X @ constraint_residual(X)


def layer_map(X, Y, rank_floor=DEFAULT_RANK_FLOOR):
    """Send ``Y`` to ``Y (XᵀX)^{1/2}`` with the principal SPD square root.

    Maps the Stiefel manifold diffeomorphically onto the layer through ``X``.
    """
    X = check_point(X, rank_floor)
    Y = check_shape(Y, X.shape, "Y")
    w, V = scipy.linalg.eigh(X.T @ X)
    root = (V * np.sqrt(w)) @ V.T
    return Y @ sym(root)


def ortho_complement(X, rank_floor=DEFAULT_RANK_FLOOR):
    """Orthonormal basis ``X_perp`` (n×(n−p)) of the orthogonal complement of span(X)."""
    X = check_point(X, rank_floor)
    p = X.shape[1]
    Q, _ = scipy.linalg.qr(X, mode="full")
    return Q[:, p:]


def tangent_dimension(n, p):
    return n * p - p * (p + 1) // 2


def tangent_basis(X, rank_floor=DEFAULT_RANK_FLOOR):
    """Basis of the tangent space of the layer through ``X``.

    Returns an array of shape ``(n*p - p*(p+1)/2, n, p)``. The first
    ``p(p-1)/2`` entries are ``X (XᵀX)⁻¹ (e_i e_jᵀ − e_j e_iᵀ)`` for ``i < j``
    in lexicographic order; the remaining ``(n-p)p`` entries are
    ``X_perp e_k e_lᵀ`` with ``k`` running fastest (column-major).
    """
    X = check_point(X, rank_floor)
    n, p = X.shape
    factor = gram_factor(X)
    X_perp = ortho_complement(X, rank_floor)
    # X (XᵀX)⁻¹, computed as a solve rather than by forming the inverse
    X_ginv = gram_solve(factor, X.T).T

    basis = np.empty((tangent_dimension(n, p), n, p))
    idx = 0
    for i in range(p):
        for j in range(i + 1, p):
            vec = np.zeros((n, p))
            vec[:, j] = X_ginv[:, i]
            vec[:, i] = -X_ginv[:, j]
            basis[idx] = vec
            idx += 1
    for l in range(p):
        for k in range(n - p):
            vec = np.zeros((n, p))
            vec[:, l] = X_perp[:, k]
            basis[idx] = vec
            idx += 1
    return basis


def is_tangent(X, xi, tol=1e-10):
    """Whether ``xiᵀX + Xᵀxi`` vanishes relative to ``max(1, ‖X‖·‖xi‖)``."""
    X = check_matrix(X, "X")
    xi = check_shape(xi, X.shape, "xi")
    drift = xi.T @ X + X.T @ xi
    scale = max(1.0, np.linalg.norm(X) * np.linalg.norm(xi))
    return bool(np.linalg.norm(drift) <= tol * scale)
