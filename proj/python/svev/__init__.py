"""Singular value and eigenvalue cross-correlations of Polya ensembles."""

from ._core import (
    ConfigError,
    DegenerateInput,
    DomainError,
    Model,
    PrecisionInsufficient,
    conditional_cdf,
    conditional_density,
    inc_beta,
    jacobi_poly,
    laguerre_poly,
    ln_gamma,
    lower_inc_gamma,
    sample_spectra,
    verify_quick,
)

__all__ = [
    "ConfigError",
    "DegenerateInput",
    "DomainError",
    "Model",
    "PrecisionInsufficient",
    "conditional_cdf",
    "conditional_density",
    "inc_beta",
    "jacobi_poly",
    "laguerre_poly",
    "ln_gamma",
    "lower_inc_gamma",
    "sample_spectra",
    "verify_quick",
]
