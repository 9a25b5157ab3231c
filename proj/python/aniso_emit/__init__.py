"""Spontaneous emission rates of a dipole in an anisotropic dielectric."""

from ._core import (
    ToleranceNotReached,
    angular_distribution,
    completeness_defect,
    greens_rate,
    interp_breakdown,
    peak_emission_angles,
    random_orientation_rate,
    rate_local_field,
    rate_model,
    rate_numeric,
    rate_uniaxial,
    run_cli,
    solve_modes,
    validate,
)

__all__ = [
    "ToleranceNotReached",
    "angular_distribution",
    "completeness_defect",
    "greens_rate",
    "interp_breakdown",
    "peak_emission_angles",
    "random_orientation_rate",
    "rate_local_field",
    "rate_model",
    "rate_numeric",
    "rate_uniaxial",
    "run_cli",
    "solve_modes",
    "validate",
]
