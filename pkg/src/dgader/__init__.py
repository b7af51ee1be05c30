"""One-dimensional discontinuous Galerkin solvers for hyperbolic conservation laws.

SSP Runge-Kutta time stepping with the Zhang-Shu convex-state-preserving
limiter, and one-step ADER-DG (local space-time predictor, or
Cauchy-Kowalewski for linear advection).
"""

from .ader import (
    AderCKScheme, AderPredictorScheme, SpaceTimeBasis, build_spacetime_basis,
    ck_ader_advection_flux, predict_element)
from .basis import Basis, build_basis, evaluate_solution, transfer_matrix
from .config import RunConfig, load_config, parse_config
from .dg import (
    DGOperator, DGSolution, SemidiscreteConfig, cell_mean, project_function,
    semidiscrete_rhs, total_integral)
from .driver import convergence_study, run_simulation, solution_errors
from .errors import ConfigError, DGError, InadmissibleStateError, PicardConvergenceError
from .fluxes import make_face_flux, rusanov, upwind_advection
from .laws import advection_law, blend_to_frontier, burgers_law, euler_law
from .limiter import LimiterReport, limit_cell, limit_solution
from .mesh import Mesh1D, build_uniform_mesh
from .quadrature import QuadratureRule, gauss_legendre_rule, gauss_lobatto_rule
from .timestepping import ButcherTableau, SSPScheme, compute_dt, rk_step, ssp_step

__all__ = [
    "AderCKScheme", "AderPredictorScheme", "SpaceTimeBasis", "build_spacetime_basis",
    "ck_ader_advection_flux", "predict_element",
    "Basis", "build_basis", "evaluate_solution", "transfer_matrix",
    "RunConfig", "load_config", "parse_config",
    "DGOperator", "DGSolution", "SemidiscreteConfig", "cell_mean", "project_function",
    "semidiscrete_rhs", "total_integral",
    "convergence_study", "run_simulation", "solution_errors",
    "ConfigError", "DGError", "InadmissibleStateError", "PicardConvergenceError",
    "make_face_flux", "rusanov", "upwind_advection",
    "advection_law", "blend_to_frontier", "burgers_law", "euler_law",
    "LimiterReport", "limit_cell", "limit_solution",
    "Mesh1D", "build_uniform_mesh",
    "QuadratureRule", "gauss_legendre_rule", "gauss_lobatto_rule",
    "ButcherTableau", "SSPScheme", "compute_dt", "rk_step", "ssp_step",
]

__version__ = "0.1.0"
