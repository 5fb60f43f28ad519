"""Lax pair of the quantum Painleve II equation and its zero-curvature residual.

The linear system is ``Psi_lambda = A Psi``, ``Psi_z = B Psi`` with::

    A = (8i lam^2 + i f^2 - 2i z) s3 + f' s2 + (c/(4 lam) - 4 lam f) s1 + i hbar s2
    B = -2i lam s3 + f s1 + f I

Cross-differentiation gives the compatibility condition
``dA/dz - dB/dlam + [A, B] = 0``.  Everything here is evaluated for
commuting (scalar) ``z`` and ``f``; in that setting the residual reduces to::

    R.c0 = 0
    R.c1 = 4i lam hbar
    R.c2 = f'' - 2 f^3 + 4 z f - c
    R.c3 = 2 hbar f

so the hbar-proportional pieces survive as quantum correction terms while the
sigma2 coefficient carries the classical Painleve II equation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SingularSpectralParam, ValidationError
from .pauli import PauliMatrix2, comm


@dataclass(frozen=True)
class SpectralParams:
    lam: complex = 1.0
    c: complex = 0.0
    hbar: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "lam", complex(self.lam))
        object.__setattr__(self, "c", complex(self.c))
        if self.hbar < 0:
            raise ValidationError("hbar must be non-negative")


@dataclass(frozen=True)
class JetPoint:
    """Point of the 2-jet of f: (z, f, f', f'')."""

    z: complex
    f: complex
    fp: complex = 0j
    fpp: complex = 0j


def _c_over_4lam(sp: SpectralParams) -> complex:
    if sp.lam == 0:
        if sp.c != 0:
            raise SingularSpectralParam("lambda = 0 with c != 0 in the A matrix")
        return 0j
    return sp.c / (4 * sp.lam)


def build_A(p: JetPoint, sp: SpectralParams) -> PauliMatrix2:
    lam, f = sp.lam, p.f
    return PauliMatrix2(
        0,
        _c_over_4lam(sp) - 4 * lam * f,
        p.fp + 1j * sp.hbar,
        1j * (8 * lam**2 + f**2 - 2 * p.z),
    )


def build_B(z: complex, f: complex, sp: SpectralParams) -> PauliMatrix2:
    # no explicit z dependence; z kept in the signature for symmetry with A
    return PauliMatrix2(f, f, 0, -2j * sp.lam)


def dA_dz(p: JetPoint, sp: SpectralParams) -> PauliMatrix2:
    """Total z-derivative of A along the jet (c/(4 lam) is z-independent)."""
    return PauliMatrix2(
        0,
        -4 * sp.lam * p.fp,
        p.fpp,
        1j * (2 * p.f * p.fp - 2),
    )


def dB_dlam(sp: SpectralParams) -> PauliMatrix2:
    return PauliMatrix2(0, 0, 0, -2j)


def zero_curvature_residual(p: JetPoint, sp: SpectralParams) -> PauliMatrix2:
    """``dA/dz - dB/dlam + [A, B]`` in Pauli coefficients."""
    a = build_A(p, sp)
    b = build_B(p.z, p.f, sp)
    return dA_dz(p, sp) - dB_dlam(sp) + comm(a, b)


def predicted_residual(p: JetPoint, sp: SpectralParams) -> PauliMatrix2:
    """Closed-form decomposition of the zero-curvature residual."""
    f = p.f
    return PauliMatrix2(
        0,
        4j * sp.lam * sp.hbar,
        p.fpp - 2 * f**3 + 4 * p.z * f - sp.c,
        2 * sp.hbar * f,
    )


def qpii_rhs_residual(p: JetPoint, sp: SpectralParams) -> complex:
    """``f'' - (2 f^3 - 4 z f - 2i hbar f + c)``; zero on QPII solutions."""
    f = p.f
    return p.fpp - (2 * f**3 - 4 * p.z * f - 2j * sp.hbar * f + sp.c)


def residual_scale(p: JetPoint, sp: SpectralParams) -> float:
    """Magnitude of the largest term entering the sigma2 balance (at least 1)."""
    f = p.f
    return max(1.0, abs(p.fpp), abs(2 * f**3), abs(4 * p.z * f), abs(sp.c))
