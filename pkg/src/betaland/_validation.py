"""Input validation shared by every module."""

import numbers

import numpy as np
import scipy.linalg
from sklearn.utils.validation import check_array

DEFAULT_RANK_FLOOR = 1e-10


class SingularLayerError(ValueError):
    """Raised when a point is too close to rank deficiency for XᵀX to be inverted."""


def check_matrix(M, name="matrix"):
    """Return ``M`` as a finite 2-d float64 array."""
    M = check_array(M, dtype=np.float64, ensure_2d=True, ensure_all_finite=True,
                    input_name=name)
    return M


def check_shape(M, shape, name):
    M = check_matrix(M, name)
    if M.shape != tuple(shape):
        raise ValueError(f"{name} has shape {M.shape}, expected {tuple(shape)}")
    return M


def sigma_ratio(X):
    """σ_min(X) / σ_max(X); 0 for the zero matrix."""
    s = np.linalg.svd(X, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0.0
    return float(s[-1] / s[0])


def check_point(X, rank_floor=DEFAULT_RANK_FLOOR):
    """Validate a full-rank n×p point with p <= n.

    Raises
    ------
    ValueError
        If p > n.
    SingularLayerError
        If σ_min(X) < rank_floor · σ_max(X).
    """
    X = check_matrix(X, "X")
    n, p = X.shape
    if p > n:
        raise ValueError(f"p must satisfy p <= n (got n={n}, p={p})")
    ratio = sigma_ratio(X)
    if ratio < rank_floor:
        raise SingularLayerError(
            f"X is numerically rank deficient: sigma_min/sigma_max = {ratio:.3e} "
            f"< {rank_floor:.1e}")
    return X


def check_beta(beta):
    if not isinstance(beta, numbers.Real) or isinstance(beta, bool):
        raise TypeError(f"beta must be a real scalar, got {type(beta).__name__}")
    beta = float(beta)
    if not np.isfinite(beta) or beta <= 0.0:
        raise ValueError(f"beta must be positive, got {beta}")
    return beta


def gram_factor(X):
    """Cholesky factor of XᵀX, for use with :func:`scipy.linalg.cho_solve`."""
    try:
        return scipy.linalg.cho_factor(X.T @ X, lower=False, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise SingularLayerError("XᵀX is not positive definite") from exc


def gram_solve(factor, B):
    """(XᵀX)⁻¹ B using a factor from :func:`gram_factor`."""
    return scipy.linalg.cho_solve(factor, B, check_finite=False)


def sym(A):
    return 0.5 * (A + A.T)


def skew(A):
    return 0.5 * (A - A.T)
