"""Covariation estimation for asynchronously observed pairs."""

from ._core import (
    ComputationError,
    ValidationError,
    __version__,
    estimate,
    fixed_grid_previous_tick,
    hy_bruteforce,
    hy_estimate,
    poisson_qcv_limits,
    qcv_slopes,
    refresh_previous_tick,
    run_mc,
    simulate,
    sync_grid,
)

__all__ = [
    "ComputationError",
    "ValidationError",
    "__version__",
    "estimate",
    "fixed_grid_previous_tick",
    "hy_bruteforce",
    "hy_estimate",
    "poisson_qcv_limits",
    "qcv_slopes",
    "refresh_previous_tick",
    "run_mc",
    "simulate",
    "sync_grid",
]
