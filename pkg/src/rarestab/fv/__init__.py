from .backend import available as available_backends, get as get_backend, set_backend
from .grid import FieldSet, Grid2D, SolverConfig
from .solver import (
    EntropyDiagnostics,
    GuardViolation,
    RunResult,
    SERIES_COLUMNS,
    StepAbort,
    advance,
    check_guard,
    entropy_production,
    initialize_perturbed,
    initialize_riemann,
    l1_error,
    numerical_flux,
    physical_flux,
    run,
    stable_dt,
    step,
)
