"""Continuous-variable Grover search on a self-conjugate grid."""

from ._cvsearch import (
    CvsearchError,
    __version__,
    coordinates,
    fourier,
    fourier_adjoint,
    fubini_study_distance,
    gft,
    grover_iterate,
    run,
    success_probability,
    sweep,
    validate,
)

__all__ = [
    "CvsearchError",
    "__version__",
    "coordinates",
    "fourier",
    "fourier_adjoint",
    "fubini_study_distance",
    "gft",
    "grover_iterate",
    "run",
    "success_probability",
    "sweep",
    "validate",
]
