"""Quantum Painleve II, its Riccati closed form, and the Yukawa/Hulthen
approximation chain, checked numerically."""

from .errors import (
    BlowUp,
    DegenerateLambda,
    EmptyGrid,
    GridMismatch,
    GridTooCoarse,
    NearPole,
    NoBoundState,
    NumericalError,
    QPainleveError,
    SingularSpectralParam,
    SingularStep,
    TooFewSamples,
    UnknownSchema,
    ValidationError,
)
from .lax import JetPoint, SpectralParams
from .pauli import PauliMatrix2

__all__ = [
    "BlowUp",
    "DegenerateLambda",
    "EmptyGrid",
    "GridMismatch",
    "GridTooCoarse",
    "JetPoint",
    "NearPole",
    "NoBoundState",
    "NumericalError",
    "PauliMatrix2",
    "QPainleveError",
    "SingularSpectralParam",
    "SingularStep",
    "SpectralParams",
    "TooFewSamples",
    "UnknownSchema",
    "ValidationError",
]
