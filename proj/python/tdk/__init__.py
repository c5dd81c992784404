"""Numerical laboratory for decay of small perturbations of a compressible
turbulent-flow model.

The heavy lifting lives in the compiled extension ``tdk._core``; this package
re-exports its public surface.
"""

from ._core import (
    LabError,
    acoustic_mode_entries,
    c1_bound,
    derive_constants,
    fit_exponent,
    gaussian_acoustic_norms,
    gaussian_heat_norms,
    iteration_cap,
    run_lab,
    sigma,
    verify_convolution_bound,
)

__all__ = [
    "LabError",
    "acoustic_mode_entries",
    "c1_bound",
    "derive_constants",
    "fit_exponent",
    "gaussian_acoustic_norms",
    "gaussian_heat_norms",
    "iteration_cap",
    "run_lab",
    "sigma",
    "verify_convolution_bound",
]
