"""Solver and verifier for self-similar axisymmetric flows with swirl.

The package computes viscous similarity profiles of the reduced
stationary Navier-Stokes system, evaluates the explicit inviscid solution
families on half-space and conical domains, certifies numerically that no
single-point slip discontinuity satisfies the Rankine-Hugoniot jump
conditions, and reconstructs physical velocity/pressure fields for export.
"""

__version__ = "0.1.0"

from .errors import (
    BlowUpError,
    DomainError,
    MaxIterationsError,
    OutOfDomainError,
    QuadratureOverflowError,
    SolverFailure,
    StepBudgetError,
    SwirlSolveError,
)
from .euler import (
    CertificationReport,
    JumpBrackets,
    JumpReport,
    OneSidedState,
    PiecewiseEulerSolution,
    certify_nonexistence,
    default_grid,
    euler_conical,
    euler_continuous,
    integrated_momentum_defect,
    inviscid_residuals,
    jump_brackets,
    jump_ratio_conical,
    jump_ratio_half_space,
    piecewise_ansatz,
    sign_function_f,
    sign_function_j,
    sign_function_j_conical,
)
from .fields import PhysicalField, export_csv, export_vtk, reconstruct
from .similarity import (
    FlowParameters,
    SerrinProfile,
    SimilarityProfile,
    load_profile,
    phi,
    phi_prime,
    profile_from_dict,
    profile_to_dict,
    save_profile,
    serrin_transform,
    velocities_from_theta,
    x_to_xi,
    xi_to_x,
)
from .viscous import (
    RegimeLabel,
    SolverConfig,
    SolverGrid,
    SwirlForcing,
    classify_regime,
    compute_G,
    parameter_sweep,
    picard_solve,
    solve_theta_given_V,
    solve_V_given_theta,
    sweep_to_csv,
    viscous_residuals,
)

__all__ = [
    "__version__",
    # errors
    "SwirlSolveError",
    "DomainError",
    "OutOfDomainError",
    "SolverFailure",
    "BlowUpError",
    "StepBudgetError",
    "QuadratureOverflowError",
    "MaxIterationsError",
    # similarity core
    "FlowParameters",
    "SimilarityProfile",
    "SerrinProfile",
    "phi",
    "phi_prime",
    "xi_to_x",
    "x_to_xi",
    "velocities_from_theta",
    "serrin_transform",
    "load_profile",
    "save_profile",
    "profile_to_dict",
    "profile_from_dict",
    # inviscid families and certification
    "euler_continuous",
    "euler_conical",
    "default_grid",
    "PiecewiseEulerSolution",
    "piecewise_ansatz",
    "OneSidedState",
    "JumpBrackets",
    "JumpReport",
    "CertificationReport",
    "jump_brackets",
    "jump_ratio_half_space",
    "jump_ratio_conical",
    "sign_function_j",
    "sign_function_j_conical",
    "sign_function_f",
    "certify_nonexistence",
    "inviscid_residuals",
    "integrated_momentum_defect",
    # viscous solver
    "SolverConfig",
    "SolverGrid",
    "SwirlForcing",
    "RegimeLabel",
    "compute_G",
    "solve_V_given_theta",
    "solve_theta_given_V",
    "picard_solve",
    "viscous_residuals",
    "classify_regime",
    "parameter_sweep",
    "sweep_to_csv",
    # physical fields
    "PhysicalField",
    "reconstruct",
    "export_csv",
    "export_vtk",
]
