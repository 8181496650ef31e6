"""Landing method for optimization under orthogonality constraints.

The tangent term is the Riemannian gradient of the cost on the current layer
``{Y : YᵀY = XᵀX}`` under a β-metric extended to all full-rank matrices.
"""

from ._validation import SingularLayerError
from .constraint import (
    constraint_residual,
    infeasibility,
    infeasibility_grad,
    is_tangent,
    layer_map,
    ortho_complement,
    tangent_basis,
)
from .estimator import LandingPCA, LandingSolver
from .geometry import (
    grad_canonical,
    grad_constrained,
    grad_unconstrained,
    is_normal,
    project_tangent,
)
from .landing import LandingConfig, LandingResult, landing_step, solve
from .metric import metric_eval, metric_eval_stiefel
from .problems import Objective, procrustes, random_instance, rayleigh

__version__ = "0.1.0"

__all__ = [
    "SingularLayerError",
    "constraint_residual",
    "infeasibility",
    "infeasibility_grad",
    "is_tangent",
    "layer_map",
    "ortho_complement",
    "tangent_basis",
    "LandingPCA",
    "LandingSolver",
    "grad_canonical",
    "grad_constrained",
    "grad_unconstrained",
    "is_normal",
    "project_tangent",
    "LandingConfig",
    "LandingResult",
    "landing_step",
    "solve",
    "metric_eval",
    "metric_eval_stiefel",
    "Objective",
    "procrustes",
    "random_instance",
    "rayleigh",
]
