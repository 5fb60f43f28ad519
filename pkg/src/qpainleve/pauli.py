"""2x2 complex matrices held as coefficients in the Pauli basis.

Convention::

    sigma1 = [[0, 1], [1, 0]]
    sigma2 = [[0, -1j], [1j, 0]]
    sigma3 = [[1, 0], [0, -1]]

A matrix ``M = c0*I + c1*sigma1 + c2*sigma2 + c3*sigma3`` is stored as the four
complex coefficients.  Products are computed in coefficient form with
``(a0 + a.s)(b0 + b.s) = a0 b0 + a.b + (a0 b + b0 a + i a x b).s``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import ValidationError

IDENTITY = np.eye(2, dtype=complex)
SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)
BASIS = (IDENTITY, SIGMA1, SIGMA2, SIGMA3)


def _finite(*values: complex) -> None:
    for v in values:
        if not cmath.isfinite(v):
            raise ValidationError(f"non-finite coefficient {v!r}")


@dataclass(frozen=True)
class PauliMatrix2:
    c0: complex = 0j
    c1: complex = 0j
    c2: complex = 0j
    c3: complex = 0j

    def __post_init__(self):
        for name in ("c0", "c1", "c2", "c3"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        _finite(self.c0, self.c1, self.c2, self.c3)

    def __iter__(self) -> Iterator[complex]:
        return iter((self.c0, self.c1, self.c2, self.c3))

    @property
    def vector(self) -> tuple[complex, complex, complex]:
        return (self.c1, self.c2, self.c3)

    def dense(self) -> np.ndarray:
        return compose(self.c0, self.c1, self.c2, self.c3)

    def __add__(self, other: PauliMatrix2) -> PauliMatrix2:
        return PauliMatrix2(*(a + b for a, b in zip(self, other)))

    def __sub__(self, other: PauliMatrix2) -> PauliMatrix2:
        return PauliMatrix2(*(a - b for a, b in zip(self, other)))

    def __neg__(self) -> PauliMatrix2:
        return PauliMatrix2(*(-a for a in self))

    def __mul__(self, scalar: complex) -> PauliMatrix2:
        return PauliMatrix2(*(a * scalar for a in self))

    __rmul__ = __mul__

    def __matmul__(self, other: PauliMatrix2) -> PauliMatrix2:
        a0, (a1, a2, a3) = self.c0, self.vector
        b0, (b1, b2, b3) = other.c0, other.vector
        return PauliMatrix2(
            a0 * b0 + a1 * b1 + a2 * b2 + a3 * b3,
            a0 * b1 + b0 * a1 + 1j * (a2 * b3 - a3 * b2),
            a0 * b2 + b0 * a2 + 1j * (a3 * b1 - a1 * b3),
            a0 * b3 + b0 * a3 + 1j * (a1 * b2 - a2 * b1),
        )


def compose(c0: complex, c1: complex, c2: complex, c3: complex) -> np.ndarray:
    """Dense 2x2 form of ``c0 I + c1 s1 + c2 s2 + c3 s3``."""
    _finite(c0, c1, c2, c3)
    return np.array(
        [[c0 + c3, c1 - 1j * c2], [c1 + 1j * c2, c0 - c3]], dtype=complex
    )


def decompose(m: np.ndarray | PauliMatrix2) -> PauliMatrix2:
    """Pauli coefficients of a dense 2x2 matrix, ``ck = tr(sk M) / 2``."""
    if isinstance(m, PauliMatrix2):
        return m
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise ValidationError(f"expected a 2x2 matrix, got shape {m.shape}")
    (a, b), (c, d) = m
    return PauliMatrix2((a + d) / 2, (b + c) / 2, 1j * (b - c) / 2, (a - d) / 2)


SIGMA = (
    PauliMatrix2(1, 0, 0, 0),
    PauliMatrix2(0, 1, 0, 0),
    PauliMatrix2(0, 0, 1, 0),
    PauliMatrix2(0, 0, 0, 1),
)


def comm(a, b):
    """Commutator ``AB - BA``; dense in, dense out, Pauli in, Pauli out."""
    if isinstance(a, PauliMatrix2) and isinstance(b, PauliMatrix2):
        return a @ b - b @ a
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    return a @ b - b @ a


def acomm(a, b):
    """Anticommutator ``AB + BA``."""
    if isinstance(a, PauliMatrix2) and isinstance(b, PauliMatrix2):
        return a @ b + b @ a
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    return a @ b + b @ a


def fro_norm(m) -> float:
    if isinstance(m, PauliMatrix2):
        # ||M||_F^2 = 2 * sum |ck|^2 for the Pauli basis
        return float(np.sqrt(2.0 * sum(abs(c) ** 2 for c in m)))
    return float(np.linalg.norm(np.asarray(m, dtype=complex)))
