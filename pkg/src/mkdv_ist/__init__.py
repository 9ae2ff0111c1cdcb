"""Inverse scattering, exact solutions and long-time asymptotics for the
focusing mKdV equation u_t + u_xxx + 6 u^2 u_x = 0."""

from .errors import InputError, NumericalError
from .scattering import (
    DiscreteEigenpair,
    Kind,
    PotentialSample,
    ScatteringData,
    breather,
    direct_transform,
    evolve_scattering,
    reflectionless,
    soliton,
)

__all__ = [
    "DiscreteEigenpair",
    "InputError",
    "Kind",
    "NumericalError",
    "PotentialSample",
    "ScatteringData",
    "breather",
    "direct_transform",
    "evolve_scattering",
    "reflectionless",
    "soliton",
]

__version__ = "0.1.0"
