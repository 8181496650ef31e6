"""scikit-learn compatible front ends for the landing solver."""

import warnings

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import ConvergenceWarning
from sklearn.utils import check_random_state
from sklearn.utils.validation import check_is_fitted, validate_data

from ._validation import DEFAULT_RANK_FLOOR, check_point
from .landing import LandingConfig, solve
from .problems import rayleigh


class LandingSolver(BaseEstimator):
    """Minimize an objective over the Stiefel manifold with the landing method.

    Parameters
    ----------
    beta : float, default=0.5
        Metric parameter; 1 is Euclidean, 0.5 canonical.
    omega : float, default=1.0
        Weight of the infeasibility term.
    eta : float or None, default=None
        Step size. ``None`` uses ``0.1 / (1 + σ_max(X0)²)``.
    epsilon : float, default=1e-8
        Stop once ``‖grad‖ + ‖XᵀX − I‖`` drops below this.
    max_iters : int, default=10000
    step_policy : {"fixed", "backtracking"}, default="fixed"
    shrink, growth : float
        Backtracking factors.
    rank_floor : float, default=1e-10
        Smallest accepted ``σ_min / σ_max`` of an iterate.

    Attributes
    ----------
    X_ : ndarray of shape (n, p)
        Final iterate.
    trace_ : list of IterationRecord
    status_ : str
    n_iter_ : int
    """

    def __init__(self, beta=0.5, omega=1.0, eta=None, epsilon=1e-8, max_iters=10000,
                 step_policy="fixed", shrink=0.5, growth=1.1,
                 rank_floor=DEFAULT_RANK_FLOOR):
        self.beta = beta
        self.omega = omega
        self.eta = eta
        self.epsilon = epsilon
        self.max_iters = max_iters
        self.step_policy = step_policy
        self.shrink = shrink
        self.growth = growth
        self.rank_floor = rank_floor

    def _config(self):
        return LandingConfig(
            beta=self.beta, omega=self.omega, eta=self.eta, epsilon=self.epsilon,
            max_iters=self.max_iters, step_policy=self.step_policy,
            shrink=self.shrink, growth=self.growth, rank_floor=self.rank_floor)

    def fit(self, X, objective):
        """Run from the starting point ``X`` (n×p) on ``objective``."""
        X = check_point(X, self.rank_floor)
        result = solve(objective, X, self._config())
        self.result_ = result
        self.X_ = result.final_point
        self.trace_ = result.trace
        self.status_ = result.status
        self.n_iter_ = result.n_iter
        return self

    def score(self, X=None, objective=None):
        """Negative objective value at the final iterate (higher is better)."""
        check_is_fitted(self, "X_")
        if objective is None:
            return -self.trace_[-1].f_value
        return -float(objective.fun(self.X_))


class LandingPCA(TransformerMixin, BaseEstimator):
    """Principal subspace by trace maximization under orthogonality constraints.

    Fits ``n_components`` orthonormal directions maximizing the captured
    variance, found with the landing method instead of an eigensolver.
    """

    def __init__(self, n_components=2, beta=0.5, omega=1.0, eta=None, epsilon=1e-8,
                 max_iters=10000, random_state=None):
        self.n_components = n_components
        self.beta = beta
        self.omega = omega
        self.eta = eta
        self.epsilon = epsilon
        self.max_iters = max_iters
        self.random_state = random_state

    def fit(self, X, y=None):
        X = validate_data(self, X, dtype=np.float64, ensure_min_samples=2)
        n_features = X.shape[1]
        k = self.n_components
        if not 1 <= k <= n_features:
            raise ValueError(
                f"n_components must lie in [1, {n_features}], got {k}")
        self.mean_ = X.mean(axis=0)
        Xc = X - self.mean_
        cov = Xc.T @ Xc / (X.shape[0] - 1)
        scale = np.linalg.norm(cov, 2)
        if scale == 0.0:
            scale = 1.0
        # unit spectral norm keeps the default step size stable
        objective = rayleigh(-cov / scale, k)

        rng = check_random_state(self.random_state)
        X0, _ = np.linalg.qr(rng.standard_normal((n_features, k)))
        config = LandingConfig(beta=self.beta, omega=self.omega, eta=self.eta,
                               epsilon=self.epsilon, max_iters=self.max_iters)
        result = solve(objective, X0, config)
        if not result.converged:
            warnings.warn(f"landing stopped with status {result.status!r}",
                          ConvergenceWarning)
        W = result.final_point
        self.components_ = W.T
        self.explained_variance_ = np.einsum("ij,jk,ki->i", W.T, cov, W)
        self.n_iter_ = result.n_iter
        self.status_ = result.status
        return self

    def transform(self, X):
        check_is_fitted(self, "components_")
        X = validate_data(self, X, dtype=np.float64, reset=False)
        return (X - self.mean_) @ self.components_.T
