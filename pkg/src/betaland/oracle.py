"""Brute-force reference computations used to check the closed-form formulas.

None of these call the closed forms they are compared against: the gradient
and projection oracles only use :func:`betaland.metric.gram_matrix` and
:func:`betaland.constraint.tangent_basis`.
"""

import numpy as np
import scipy.linalg

from ._validation import DEFAULT_RANK_FLOOR, check_matrix, check_point, check_shape
from .constraint import tangent_basis
from .metric import gram_matrix, unvec, vec

__all__ = [
    "IllConditionedError",
    "MAX_CONDITION",
    "fd_step",
    "fd_directional",
    "relative_error",
    "gradient_via_gram",
    "projection_via_lsq",
    "eigen_reference",
]

MAX_CONDITION = 1e10


class IllConditionedError(ValueError):
    """The linear system an oracle would solve is too ill-conditioned to trust."""


def fd_step(X):
    return 1e-6 * (1.0 + np.linalg.norm(X))


def fd_directional(fun, X, xi, step=None):
    """Central difference ``(fun(X + t·xi) − fun(X − t·xi)) / 2t``."""
    X = np.asarray(X, dtype=np.float64)
    xi = np.asarray(xi, dtype=np.float64)
    if step is None:
        step = fd_step(X)
    if step <= 0:
        raise ValueError("step must be positive")
    return (fun(X + step * xi) - fun(X - step * xi)) / (2.0 * step)


def relative_error(a, b):
    """``‖a − b‖ / max(1, ‖a‖, ‖b‖)`` (Frobenius, or absolute value for scalars)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    return float(np.linalg.norm(a - b) / max(1.0, na, nb))


def _spd_solve(K, rhs):
    cond = np.linalg.cond(K)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise IllConditionedError(f"condition number {cond:.3e} exceeds {MAX_CONDITION:.0e}")
    return scipy.linalg.solve(K, rhs, assume_a="pos")


def gradient_via_gram(X, beta, eucl_grad, rank_floor=DEFAULT_RANK_FLOOR):
    """Solve ``gram_matrix(X, beta) · vec(g) = vec(eucl_grad)`` for ``g``."""
    X = check_point(X, rank_floor)
    eucl_grad = check_shape(eucl_grad, X.shape, "eucl_grad")
    G = gram_matrix(X, beta, rank_floor)
    return unvec(_spd_solve(G, vec(eucl_grad)), X.shape)


def projection_via_lsq(X, beta, Z, rank_floor=DEFAULT_RANK_FLOOR):
    """Minimize ``g(Z − ξ, Z − ξ)`` over ξ in the span of the tangent basis.

    Solves the normal equations ``VᵀGV c = VᵀG vec(Z)`` where the columns of
    ``V`` are the vectorized basis vectors.
    """
    X = check_point(X, rank_floor)
    Z = check_shape(Z, X.shape, "Z")
    basis = tangent_basis(X, rank_floor)
    if basis.shape[0] == 0:
        return np.zeros_like(Z)
    V = np.stack([vec(b) for b in basis], axis=1)
    G = gram_matrix(X, beta, rank_floor)
    GV = G @ V
    K = V.T @ GV
    K = 0.5 * (K + K.T)
    coef = _spd_solve(K, GV.T @ vec(Z))
    return unvec(V @ coef, X.shape)


def eigen_reference(A, p):
    """Sum of the ``p`` smallest eigenvalues of ``A`` and an orthonormal basis of their eigenvectors."""
    A = check_matrix(A, "A")
    w, V = scipy.linalg.eigh(A, subset_by_index=[0, p - 1])
    return float(np.sum(w)), V
