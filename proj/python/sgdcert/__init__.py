"""Finite-sum SGD experiment core: problem generators, constant
certificates, step-size windows and convergence-rate bounds."""

from sgdcert._core import (
    ContractViolation,
    GrowthViolation,
    Problem,
    ProblemConstants,
    WindowViolation,
    compute_constants,
    consistent_least_squares,
    descent_bound_rhs,
    estimate_growth_constant,
    fit_geometric_rate,
    geometric_rate,
    max_stable_step,
    reference_step,
    run,
    scaled_quadratic,
    sublinear_bound,
)

__all__ = [
    "ContractViolation",
    "GrowthViolation",
    "Problem",
    "ProblemConstants",
    "WindowViolation",
    "compute_constants",
    "consistent_least_squares",
    "descent_bound_rhs",
    "estimate_growth_constant",
    "fit_geometric_rate",
    "geometric_rate",
    "max_stable_step",
    "reference_step",
    "run",
    "scaled_quadratic",
    "sublinear_bound",
]
