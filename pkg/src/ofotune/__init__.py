"""Online Feedback Optimization with adaptive metric and step-size tuning."""

from .controller import IterationRecord, RunTrace, initial_state, ofo_iteration, run
from .errors import (
    ConfigError,
    DegenerateFitError,
    IllConditionedMetricError,
    IntegrationError,
    InvalidModelError,
    OfoError,
)
from .model import (
    ConstraintSet,
    ControllerState,
    OfoParams,
    PlantModel,
    ScalingSensitivity,
    finite_difference_gradient,
    reduced_gradient,
    spd_project_check,
)
from .plants import (
    CstrParams,
    GasLiftSurrogate,
    WellCurve,
    cstr_integrate,
    cstr_plant,
    cstr_sensitivity,
    cstr_steady_state,
    gaslift_plant,
    piecewise_constant,
    rosenbrock_plant,
    toy_plant,
)
from .qp import QpData, QpSolution, assemble_qp, kkt_residual, solve_w
from .scaling import SdpResult, adapt_heuristic, adapt_ift_analogue, adapt_sdp
from .sensitivity import (
    QpJacobians,
    accumulate_input_sensitivity,
    objective_scaling_sensitivity,
    qp_solution_jacobians,
)
from .stepsize import QuadModel, fit_quadratic, minimize_quadratic

__version__ = "0.1.0"
