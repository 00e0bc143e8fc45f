"""Exact rarefaction-wave Riemann solutions of the full Euler system, their
relative energy, inequality certification and finite-volume stability runs."""

from .gas import AdmissibilityBounds, Conserved, DomainError, GasParams, Primitive, validate_admissible
from .riemann import (
    EntropyMismatch,
    RiemannData,
    RiemannError,
    ShockFreeSolution,
    ShockRequired,
    State1D,
    VacuumFormation,
    common_entropy,
    sample,
    sample_field,
    solve_shock_free,
)

__version__ = "0.1.0"
