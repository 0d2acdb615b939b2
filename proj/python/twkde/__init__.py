"""Tweedie kernel density estimation for semicontinuous data."""

from ._core import (
    AllZeros,
    DegenerateSample,
    DomainError,
    Error,
    GridMismatch,
    GridTooNarrow,
    NonConvergence,
    __version__,
    dispersion_from_zero_mass,
    estimate,
    evaluate,
    gof,
    h_opt_mise,
    kernel,
    log_subdensity,
    lscv,
    point_mass,
    sample,
    select,
    simulate,
    unit_deviance,
    wright_series,
)

__all__ = [name for name in dir() if not name.startswith("_")]
