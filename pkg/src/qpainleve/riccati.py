"""Closed-form solution of the QPII Riccati equation.

    f(z)     = beta * exp(-4 lam z) / (1 - exp(-8 lam z)) = beta / (2 sinh(4 lam z))
    Delta(z) = exp(4 lam z)

solve ``Delta' = -4i Delta + f + [f, Delta] - Delta f Delta`` exactly when
``beta = -4 (lam + i)``.  The commutator vanishes for scalars and the identity
rests on ``f - Delta f Delta = -beta exp(4 lam z)``.

All functions accept numpy arrays for ``z``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateLambda, NearPole, ValidationError
from .lax import JetPoint, SpectralParams, qpii_rhs_residual


@dataclass(frozen=True)
class PoleGuard:
    min_denominator: float = 1e-6

    def __post_init__(self):
        if not self.min_denominator > 0:
            raise ValidationError("min_denominator must be positive")


DEFAULT_GUARD = PoleGuard()


def beta_for(lam: complex) -> complex:
    return -4 * (complex(lam) + 1j)


def closed_form_delta(z, lam: complex):
    return np.exp(4 * lam * np.asarray(z, dtype=complex))


def _denominator(z, lam, guard: PoleGuard):
    z = np.asarray(z, dtype=complex)
    den = -np.expm1(-8 * lam * z)
    bad = np.abs(den) < guard.min_denominator
    if np.any(bad):
        raise NearPole(complex(z[bad].flat[0]) if z.ndim else complex(z))
    return z, den


def closed_form_f(z, lam: complex, beta: complex, guard: PoleGuard = DEFAULT_GUARD):
    """``beta e^{-4 lam z} / (1 - e^{-8 lam z})``; NearPole inside the guard."""
    z, den = _denominator(z, lam, guard)
    return beta * np.exp(-4 * lam * z) / den


def closed_form_jet(z, lam, beta, guard: PoleGuard = DEFAULT_GUARD):
    """(f, f', f'') from exact derivatives of ``beta/2 * csch(w)``, ``w = 4 lam z``."""
    z, _ = _denominator(z, lam, guard)
    w = 4 * lam * z
    csch = 1 / np.sinh(w)
    coth = np.cosh(w) * csch
    f = 0.5 * beta * csch
    fp = -4 * lam * f * coth
    fpp = 16 * lam**2 * f * (coth**2 + csch**2)
    return f, fp, fpp


def riccati_terms(z, lam, beta, guard: PoleGuard = DEFAULT_GUARD):
    """Individual terms (Delta', -4i Delta, f, Delta f Delta) of the Riccati balance."""
    f = closed_form_f(z, lam, beta, guard)
    delta = closed_form_delta(z, lam)
    return 4 * lam * delta, -4j * delta, f, delta * f * delta


def riccati_residual(z, lam, beta, guard: PoleGuard = DEFAULT_GUARD):
    """``Delta' - (-4i Delta + f + [f, Delta] - Delta f Delta)`` with ``[f, Delta] = 0``."""
    d_delta, lin, f, dfd = riccati_terms(z, lam, beta, guard)
    return d_delta - (lin + f - dfd)


def riccati_relative_residual(z, lam, beta, guard: PoleGuard = DEFAULT_GUARD, scale: str = "max_term"):
    """|residual| over a reference magnitude.

    ``scale="max_term"`` divides by the largest of the four terms.  Near a pole
    the f terms dominate and hide an error in beta, so ``scale="linear"``
    divides by the size of the linear part, ``|Delta| max(4|lam|, 4)``.
    """
    terms = riccati_terms(z, lam, beta, guard)
    d_delta, lin, f, dfd = terms
    res = d_delta - (lin + f - dfd)
    if scale == "max_term":
        ref = np.max(np.abs(np.stack(np.broadcast_arrays(*terms))), axis=0)
    elif scale == "linear":
        ref = np.abs(lin) * max(abs(lam), 1.0)
    else:
        raise ValidationError(f"unknown scale {scale!r}")
    return np.abs(res) / ref


def pole_lattice(lam: complex, region: tuple[float, float, float, float]) -> list[complex]:
    """Zeros of ``1 - e^{-8 lam z}`` inside ``re_min <= Re z <= re_max``,
    ``im_min <= Im z <= im_max``; they are ``z_k = i pi k / (4 lam)``.
    """
    lam = complex(lam)
    if lam == 0:
        raise DegenerateLambda("pole lattice undefined for lambda = 0")
    re_min, re_max, im_min, im_max = region
    if re_min > re_max or im_min > im_max:
        return []
    radius = max(abs(complex(x, y)) for x in (re_min, re_max) for y in (im_min, im_max))
    step = np.pi / (4 * abs(lam))
    kmax = int(np.floor(radius / step)) + 1
    eps = 1e-12 * max(1.0, radius)
    poles = []
    for k in range(-kmax, kmax + 1):
        zk = 1j * np.pi * k / (4 * lam)
        if (re_min - eps <= zk.real <= re_max + eps) and (im_min - eps <= zk.imag <= im_max + eps):
            poles.append(complex(zk))
    return sorted(poles, key=lambda p: (p.imag, p.real))


def qpii_residual_of_closed_form(
    z, lam: complex, sp: SpectralParams, guard: PoleGuard = DEFAULT_GUARD, beta=None
):
    """QPII residual of the closed form at ``z`` (generally nonzero).

    ``beta`` defaults to ``beta_for(lam)``; ``sp.lam`` is not used.
    """
    if beta is None:
        beta = beta_for(lam)
    f, fp, fpp = closed_form_jet(z, lam, beta, guard)
    return qpii_rhs_residual(JetPoint(np.asarray(z, dtype=complex), f, fp, fpp), sp)
