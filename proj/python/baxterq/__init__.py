"""Python bindings for the baxterq C++ library."""

import json as _json

from ._core import (
    BudgetError,
    ConvergenceError,
    DomainError,
    Error,
    PoleError,
    ShapeError,
    SingularMatrixError,
    d_factor,
    gamma,
    gamma_r,
    kbessel,
    lfactor,
    log_gamma,
    q_group,
    q_kernel,
    spherical_function,
    suite_names,
    whittaker,
)
from ._core import verify as _verify


def verify(suite="all", seed=7, effort=0, tol_scale=1.0):
    """Run a verification suite and return the parsed JSON report."""
    return _json.loads(_verify(suite, seed, effort, tol_scale))


__all__ = [
    "BudgetError", "ConvergenceError", "DomainError", "Error", "PoleError", "ShapeError",
    "SingularMatrixError", "d_factor", "gamma", "gamma_r", "kbessel", "lfactor", "log_gamma",
    "q_group", "q_kernel", "spherical_function", "suite_names", "verify", "whittaker",
]
