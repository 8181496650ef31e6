"""Normal space, tangent projection and Riemannian gradients under the β-metric.

The normal space of a layer does not depend on β, hence neither does the
projection. Gradients take the Euclidean gradient of the cost as input.
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
    skew,
)

__all__ = [
    "GradientPair",
    "is_normal",
    "normal_basis",
    "project_tangent",
    "grad_unconstrained",
    "grad_constrained",
    "grad_canonical",
    "gradients",
    "first_order_feasibility_drift",
]


def normal_basis(X, rank_floor=DEFAULT_RANK_FLOOR):
    """``X (XᵀX)⁻¹ (e_i e_jᵀ + e_j e_iᵀ)`` for ``i <= j``, shape ``(p(p+1)/2, n, p)``."""
    X = check_point(X, rank_floor)
    n, p = X.shape
    X_ginv = gram_solve(gram_factor(X), X.T).T
    out = []
    for i in range(p):
        for j in range(i, p):
            vec = np.zeros((n, p))
            vec[:, j] += X_ginv[:, i]
            vec[:, i] += X_ginv[:, j]
            out.append(vec)
    return np.array(out).reshape(-1, n, p)


def is_normal(X, eta, tol=1e-10, rank_floor=DEFAULT_RANK_FLOOR):
    """Whether ``eta`` lies in ``{X (XᵀX)⁻¹ S : S symmetric}``.

    Decided by a least-squares fit onto :func:`normal_basis`; the residual
    must be at most ``tol * ‖eta‖``.
    """
    X = check_point(X, rank_floor)
    eta = check_shape(eta, X.shape, "eta")
    basis = normal_basis(X, rank_floor)
    V = basis.reshape(basis.shape[0], -1).T
    coef, *_ = np.linalg.lstsq(V, eta.ravel(), rcond=None)
    residual = np.linalg.norm(V @ coef - eta.ravel())
    return bool(residual <= tol * np.linalg.norm(eta))


def project_tangent(X, Z, rank_floor=DEFAULT_RANK_FLOOR):
    """Metric-orthogonal projection of ``Z`` onto the tangent space of the layer.

    ``X (XᵀX)⁻¹ skew(XᵀZ) + (I − X (XᵀX)⁻¹ Xᵀ) Z``, valid for every β.
    """
    X = check_point(X, rank_floor)
    Z = check_shape(Z, X.shape, "Z")
    factor = gram_factor(X)
    XtZ = X.T @ Z
    return Z + X @ gram_solve(factor, skew(XtZ) - XtZ)


def grad_unconstrained(X, beta, eucl_grad, rank_floor=DEFAULT_RANK_FLOOR):
    """Riesz representer of Df(X) in the β-metric over the whole ambient space.

    ``(I + (1−β)/β · X (XᵀX)⁻¹ Xᵀ) ∇f · XᵀX``
    """
    X = check_point(X, rank_floor)
    beta = check_beta(beta)
    eucl_grad = check_shape(eucl_grad, X.shape, "eucl_grad")
    factor = gram_factor(X)
    E = eucl_grad @ (X.T @ X)
    return E + ((1.0 - beta) / beta) * (X @ gram_solve(factor, X.T @ E))


def _grad_constrained(X, beta, eucl_grad, factor):
    G = X.T @ X
    E = eucl_grad @ G
    if X.shape[0] == X.shape[1]:
        # square X: no complement, so grad = (1/β) X G⁻¹ skew(XᵀE), exactly
        # zero when p = 1 instead of a rounding residue
        return X @ gram_solve(factor, skew(X.T @ E)) / beta
    c = 0.5 / beta
    return (E - c * (X @ (eucl_grad.T @ X))
            + (c - 1.0) * (X @ gram_solve(factor, X.T @ E)))


def grad_constrained(X, beta, eucl_grad, rank_floor=DEFAULT_RANK_FLOOR):
    """Riemannian gradient on the layer through ``X`` in the β-metric::

        ∇f XᵀX − (1/2β) X ∇fᵀ X + (1/2β − 1) X (XᵀX)⁻¹ Xᵀ ∇f XᵀX

    Equals ``project_tangent(X, grad_unconstrained(X, beta, eucl_grad))``.
    """
    X = check_point(X, rank_floor)
    beta = check_beta(beta)
    eucl_grad = check_shape(eucl_grad, X.shape, "eucl_grad")
    return _grad_constrained(X, beta, eucl_grad, gram_factor(X))


def grad_canonical(X, eucl_grad, rank_floor=DEFAULT_RANK_FLOOR):
    """β = 1/2 case, ``2 skew(∇f Xᵀ) X = ∇f XᵀX − X ∇fᵀ X``."""
    X = check_point(X, rank_floor)
    eucl_grad = check_shape(eucl_grad, X.shape, "eucl_grad")
    return eucl_grad @ (X.T @ X) - X @ (eucl_grad.T @ X)


def first_order_feasibility_drift(X, xi):
    """Directional derivative of the constraint map, ``Xᵀxi + xiᵀX``."""
    X = check_matrix(X, "X")
    xi = check_shape(xi, X.shape, "xi")
    D = X.T @ xi
    return D + D.T


@dataclass(frozen=True)
class GradientPair:
    """Euclidean, unconstrained-β and constrained-β gradients at one point."""

    euclidean: np.ndarray
    beta_unconstrained: np.ndarray
    beta_constrained: np.ndarray
    base: np.ndarray
    beta: float


def gradients(X, beta, eucl_grad, rank_floor=DEFAULT_RANK_FLOOR):
    X = check_point(X, rank_floor)
    beta = check_beta(beta)
    eucl_grad = check_shape(eucl_grad, X.shape, "eucl_grad")
    return GradientPair(
        euclidean=eucl_grad,
        beta_unconstrained=grad_unconstrained(X, beta, eucl_grad, rank_floor),
        beta_constrained=grad_constrained(X, beta, eucl_grad, rank_floor),
        base=X,
        beta=beta,
    )
