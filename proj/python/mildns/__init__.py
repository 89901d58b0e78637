"""Mild solutions of the Navier-Stokes equations in Lorentz spaces."""

from ._mildns import (
    DomainError,
    Error,
    Field,
    Grid,
    IndexError,
    ValidationError,
    alpha_constant,
    beta_constant,
    blowup_threshold,
    constants_table,
    gamma_constant,
    initial_data,
    lorentz_norm,
    lorentz_quasinorm,
    run_cli,
    solve,
)

__all__ = [
    "DomainError",
    "Error",
    "Field",
    "Grid",
    "IndexError",
    "ValidationError",
    "alpha_constant",
    "beta_constant",
    "blowup_threshold",
    "constants_table",
    "gamma_constant",
    "initial_data",
    "lorentz_norm",
    "lorentz_quasinorm",
    "run_cli",
    "solve",
]

__version__ = "0.3.0"
