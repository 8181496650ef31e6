"""Retraction-free landing iteration for orthogonality constraints.

Each step moves along the β-metric Riemannian gradient on the current layer
plus ω times the Euclidean gradient of the infeasibility::

    X ← X − η (grad_β f(X) + ω X (XᵀX − I))

No retraction is applied; the normal term pulls iterates onto the Stiefel
manifold while the tangent term decreases the cost.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ._validation import (
    DEFAULT_RANK_FLOOR,
    SingularLayerError,
    check_beta,
    check_point,
    check_shape,
    gram_factor,
    sigma_ratio,
    sym,
)
from .constraint import infeasibility
from .geometry import _grad_constrained

__all__ = [
    "CONVERGED",
    "MAX_ITERS",
    "RANK_BREAKDOWN",
    "STEP_FAILURE",
    "RankBreakdownError",
    "LandingConfig",
    "IterationRecord",
    "LandingResult",
    "default_step_size",
    "landing_direction",
    "landing_step",
    "merit_value",
    "solve",
]

logger = logging.getLogger(__name__)

CONVERGED = "converged"
MAX_ITERS = "max_iters"
RANK_BREAKDOWN = "rank_breakdown"
STEP_FAILURE = "step_failure"

STEP_POLICIES = ("fixed", "backtracking")
MAX_HALVINGS = 60
MIN_STEP = 1e-16
SUFFICIENT_DECREASE = 1e-4


class RankBreakdownError(SingularLayerError):
    """A landing step produced a numerically rank-deficient iterate."""


@dataclass(frozen=True)
class LandingConfig:
    """Parameters of a landing run.

    ``eta=None`` selects ``0.1 / (1 + σ_max(X0)²)``. ``shrink`` and
    ``growth`` only matter for the backtracking policy.
    """

    beta: float = 0.5
    omega: float = 1.0
    eta: Optional[float] = None
    epsilon: float = 1e-8
    max_iters: int = 10000
    step_policy: str = "fixed"
    shrink: float = 0.5
    growth: float = 1.1
    rank_floor: float = DEFAULT_RANK_FLOOR

    def __post_init__(self):
        check_beta(self.beta)
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.eta is not None and not self.eta > 0:
            raise ValueError(f"eta must be positive, got {self.eta}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ValueError(f"max_iters must be a positive integer, got {self.max_iters}")
        if self.step_policy not in STEP_POLICIES:
            raise ValueError(f"step_policy must be one of {STEP_POLICIES}, got {self.step_policy!r}")
        if not 0 < self.shrink < 1:
            raise ValueError(f"shrink must lie in (0, 1), got {self.shrink}")
        if not self.growth >= 1:
            raise ValueError(f"growth must be >= 1, got {self.growth}")
        if not 0 <= self.rank_floor < 1:
            raise ValueError(f"rank_floor must lie in [0, 1), got {self.rank_floor}")


@dataclass(frozen=True)
class IterationRecord:
    k: int
    f_value: float
    grad_norm: float
    h_norm: float
    N_value: float
    eta: float
    sigma_min_ratio: float


@dataclass
class LandingResult:
    final_point: np.ndarray
    trace: List[IterationRecord] = field(default_factory=list)
    status: str = MAX_ITERS

    @property
    def converged(self):
        return self.status == CONVERGED

    @property
    def n_iter(self):
        """Number of steps taken."""
        return len(self.trace) - 1


def default_step_size(X0):
    s_max = np.linalg.norm(X0, 2)
    return 0.1 / (1.0 + s_max ** 2)


def landing_direction(X, beta, omega, eucl_grad, factor=None):
    """``grad_β f(X) + ω X (XᵀX − I)``."""
    if factor is None:
        factor = gram_factor(X)
    h = sym(X.T @ X) - np.eye(X.shape[1])
    return _grad_constrained(X, beta, eucl_grad, factor) + omega * (X @ h)


def landing_step(X, beta, omega, eta, eucl_grad, rank_floor=DEFAULT_RANK_FLOOR):
    """One landing update ``X − η (grad_β f(X) + ω ∇N(X))``.

    Raises :class:`RankBreakdownError` if the new point falls below
    ``rank_floor``. No attempt is made to keep the iterate feasible.
    """
    X = check_point(X, rank_floor)
    beta = check_beta(beta)
    if not omega > 0:
        raise ValueError("omega must be positive")
    if not eta > 0:
        raise ValueError("eta must be positive")
    eucl_grad = check_shape(eucl_grad, X.shape, "eucl_grad")
    X_new = X - eta * landing_direction(X, beta, omega, eucl_grad)
    if not np.all(np.isfinite(X_new)) or sigma_ratio(X_new) < rank_floor:
        raise RankBreakdownError("landing step left the set of full-rank matrices")
    return X_new


def merit_value(objective, X, omega):
    """``f(X) + ω N(X)``, the acceptance measure of the backtracking policy."""
    return float(objective.fun(X)) + omega * infeasibility(X)


def _candidate(X, rank_floor):
    """σ ratio and Gram factor of a trial point, or ``(0, None)`` if unusable."""
    if not np.all(np.isfinite(X)):
        return 0.0, None
    ratio = sigma_ratio(X)
    if ratio < rank_floor:
        return ratio, None
    try:
        with np.errstate(over="ignore", invalid="ignore"):
            return ratio, gram_factor(X)
    except (SingularLayerError, ValueError):
        return ratio, None


def solve(objective, X0, config=None):
    """Run the landing iteration from ``X0``.

    Stops when ``‖grad_β f(X_k)‖ + ‖h(X_k)‖ <= epsilon`` (both Frobenius),
    after ``max_iters`` steps, or when no acceptable step exists. The trace
    has one record per visited iterate, starting at ``k = 0``; the ``eta``
    column holds the step taken from that iterate (0 for the last one).
    """
    config = config or LandingConfig()
    X = check_point(X0, config.rank_floor).copy()
    n, p = X.shape
    if (objective.n, objective.p) != (n, p):
        raise ValueError(
            f"objective expects {objective.n}x{objective.p} inputs, X0 is {n}x{p}")
    beta, omega = config.beta, config.omega
    eta = config.eta if config.eta is not None else default_step_size(X)
    eye = np.eye(p)

    trace = []
    ratio, factor = _candidate(X, config.rank_floor)
    if factor is None:
        raise SingularLayerError("X0 is numerically rank deficient")
    status = MAX_ITERS
    for k in range(config.max_iters + 1):
        with np.errstate(over="ignore", invalid="ignore"):
            f_value = float(objective.fun(X))
            egrad = np.asarray(objective.grad(X), dtype=np.float64)
            if egrad.shape != (n, p):
                raise ValueError(f"gradient has shape {egrad.shape}, expected {(n, p)}")
            grad = _grad_constrained(X, beta, egrad, factor)
            h = sym(X.T @ X) - eye
            h_norm = float(np.linalg.norm(h))
            grad_norm = float(np.linalg.norm(grad))

        def record(step):
            trace.append(IterationRecord(k, f_value, grad_norm, h_norm,
                                         0.5 * h_norm ** 2, float(step), ratio))

        if not np.isfinite(f_value + grad_norm + h_norm):
            # overflow after an oversized step
            status = STEP_FAILURE
            record(0.0)
            break
        if grad_norm + h_norm <= config.epsilon:
            status = CONVERGED
            record(0.0)
            break
        if k == config.max_iters:
            status = MAX_ITERS
            record(0.0)
            break

        direction = grad + omega * (X @ h)
        if config.step_policy == "fixed":
            step, X_new, new_ratio, new_factor, status = _fixed_step(
                X, direction, eta, config.rank_floor)
        else:
            merit0 = f_value + omega * 0.5 * h_norm ** 2
            step, X_new, new_ratio, new_factor, status = _backtracking_step(
                objective, X, direction, eta, merit0, config)
            if X_new is not None:
                eta = step * config.growth
        if X_new is None:
            record(0.0)
            logger.info("landing stopped at k=%d: %s", k, status)
            break
        record(step)
        X, ratio, factor = X_new, new_ratio, new_factor

    return LandingResult(final_point=X, trace=trace, status=status)


def _fixed_step(X, direction, eta, rank_floor):
    step = eta
    for _ in range(MAX_HALVINGS + 1):
        X_new = X - step * direction
        ratio, factor = _candidate(X_new, rank_floor)
        if factor is not None:
            return step, X_new, ratio, factor, None
        step *= 0.5
    return 0.0, None, 0.0, None, RANK_BREAKDOWN


def _backtracking_step(objective, X, direction, eta, merit0, config):
    d_sq = float(np.sum(direction * direction))
    # a few ulps of slack, otherwise the test stalls once the decrease drops below rounding
    slack = 8.0 * np.finfo(float).eps * max(1.0, abs(merit0))
    step = eta
    failure = STEP_FAILURE
    while step >= MIN_STEP:
        X_new = X - step * direction
        ratio, factor = _candidate(X_new, config.rank_floor)
        if factor is None:
            failure = RANK_BREAKDOWN
        else:
            merit = merit_value(objective, X_new, config.omega)
            if merit <= merit0 - SUFFICIENT_DECREASE * step * d_sq + slack:
                return step, X_new, ratio, factor, None
            failure = STEP_FAILURE
        step *= config.shrink
    return 0.0, None, 0.0, None, failure
