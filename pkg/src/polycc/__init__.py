"""Central configurations of two twisted regular N-gons in the Newtonian 2N-body problem."""

__version__ = "0.1.0"

from .errors import (CollisionError, InadmissibleTwistError, IntegrationError,
                     ParameterError, PolyccError, SingularityError)
from .polygon import BodySystem, TwistedPolygonParams, build_configuration, center_of_mass
from .newtonian import CCReport, cc_residual, lambda_of, moment_of_inertia, potential
from .kernels import KernelValues, check_theta_symmetry, kernel_values, kernel_x, kernel_yz
from .conditions import (ConditionResidual, condition_residual, cross_validate,
                         lemma32_residual, lemma34_residual)
from .solver import (ScanCell, SolveResult, certify_no_solution, solve_h, solve_ring_ratio,
                     step_property_suite)
from .collapse import TrajectoryReport, integrate_release

__all__ = [
    "BodySystem", "CCReport", "CollisionError", "ConditionResidual", "InadmissibleTwistError",
    "IntegrationError", "KernelValues", "ParameterError", "PolyccError", "ScanCell",
    "SingularityError", "SolveResult", "TrajectoryReport", "TwistedPolygonParams",
    "build_configuration", "cc_residual", "center_of_mass", "certify_no_solution",
    "check_theta_symmetry", "condition_residual", "cross_validate", "integrate_release",
    "kernel_values", "kernel_x", "kernel_yz", "lambda_of", "lemma32_residual",
    "lemma34_residual", "moment_of_inertia", "potential", "solve_h", "solve_ring_ratio",
    "step_property_suite",
]
