"""Explicitly solvable systems of first-order difference equations with
homogeneous polynomial right-hand sides: construction, constraint solving,
iteration, closed-form evaluation and verification."""

from ._core import (
    Certificate,
    DomainError,
    Error,
    ExampleResult,
    FloatOverflowError,
    HomogeneousSystem,
    NewtonResult,
    ParseError,
    RatioVector,
    Regime,
    RegimeError,
    Scalar,
    SingularJacobianError,
    SizeBudgetError,
    SolvableInstance,
    SolveMode,
    StateVector,
    Trajectory,
    Verdict,
    VerificationReport,
    __version__,
    closed_form_state,
    constraint_residuals,
    enumerate_multi_indices,
    eval_rhs,
    geometric_exponent,
    iterate,
    max_residual_magnitude,
    monomial_eval,
    multi_index_count,
    newton_solve,
    random_solvable_instance,
    ratios_from_free,
    ratios_from_init,
    run_example,
    solve_designated_coefficients,
    solve_z_pivot,
    verify_instance,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
