"""Centrifugal approximation and the approximated Yukawa potential.

The centrifugal approximation ``1/r^2 ~ 4a^2 e^{-2ar} / (1 - e^{-2ar})^2``
equals ``a^2 / sinh^2(ar)``; its relative error is ``(ar)^2/3 + O((ar)^4)``.
Under the literal identification ``r <-> z`` with ``a = 4 lam`` the squared
closed-form QPII solution has exactly this shape, which gives the Hulthen-type
stand-in for the Yukawa potential

    V(z) = -V0 |beta| e^{-8 lam z} / (1 - e^{-8 lam z}).

Two readings of ``|beta|`` are in circulation and both are supported:
``"sqrt"`` uses ``4 sqrt(lam^2 + 1)``, ``"map"`` uses ``beta^2 = 4 a^2`` i.e.
``|beta| = 2a = 8 lam``.  Only ``"map"`` reduces to ``-V0/r`` as ``r -> 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import EmptyGrid, ValidationError
from .riccati import beta_for

FINE_STRUCTURE = 1 / 137.037
BETA_CONVENTIONS = ("sqrt", "map")


@dataclass(frozen=True)
class YukawaParams:
    V0: float
    a: float
    Z: int | None = None

    def __post_init__(self):
        if not (self.V0 > 0 and self.a > 0):
            raise ValidationError("V0 and a must be positive")
        if self.Z is not None and abs(self.V0 - self.Z * FINE_STRUCTURE) > 1e-12 * self.V0:
            raise ValidationError("V0 must equal Z/137.037 when Z is given")

    @classmethod
    def from_Z(cls, Z: int, a: float) -> "YukawaParams":
        if Z < 1:
            raise ValidationError("Z must be a positive integer")
        return cls(V0=Z * FINE_STRUCTURE, a=a, Z=Z)


def _check_positive(**kw):
    for name, v in kw.items():
        if np.any(np.asarray(v) <= 0):
            raise ValidationError(f"{name} must be positive")


def centrifugal_approx(r, a):
    _check_positive(r=r, a=a)
    r = np.asarray(r, dtype=float)
    return 4 * a**2 * np.exp(-2 * a * r) / np.expm1(-2 * a * r) ** 2


def centrifugal_rel_error(r, a):
    r = np.asarray(r, dtype=float)
    return np.abs(centrifugal_approx(r, a) - 1 / r**2) * r**2


def inv_r_approx(r, a):
    """Positive root ``2a e^{-ar} / (1 - e^{-2ar})`` of the centrifugal approximation."""
    _check_positive(r=r, a=a)
    r = np.asarray(r, dtype=float)
    return -2 * a * np.exp(-a * r) / np.expm1(-2 * a * r)


def yukawa_exact(r, p: YukawaParams):
    _check_positive(r=r)
    r = np.asarray(r, dtype=float)
    return -p.V0 * np.exp(-2 * p.a * r) / r


def beta_abs(lam: float, convention: str = "sqrt") -> float:
    if convention == "sqrt":
        return 4 * np.sqrt(lam**2 + 1)
    if convention == "map":
        return 8 * lam
    raise ValidationError(f"unknown beta convention {convention!r}")


def yukawa_approx_z(z, lam: float, V0: float, beta: str | float = "sqrt"):
    """Hulthen-form approximation; ``beta`` is a convention name or |beta| itself."""
    _check_positive(z=z, lam=lam)
    b = beta_abs(lam, beta) if isinstance(beta, str) else float(beta)
    z = np.asarray(z, dtype=float)
    return V0 * b * np.exp(-8 * lam * z) / np.expm1(-8 * lam * z)


def yukawa_approx_consistent(z, lam: float, V0: float, beta: str | float = "sqrt"):
    """``-V0 e^{-8 lam z} |f(z)|``: screening factor times the approximate 1/r."""
    _check_positive(z=z, lam=lam)
    b = beta_abs(lam, beta) if isinstance(beta, str) else float(beta)
    z = np.asarray(z, dtype=float)
    abs_f = -b * np.exp(-4 * lam * z) / np.expm1(-8 * lam * z)
    return -V0 * np.exp(-8 * lam * z) * abs_f


@dataclass(frozen=True)
class MapReport:
    lam: float
    a_from_lambda: float
    beta_sq_map: float
    beta_abs_paper: float
    beta_riccati: complex
    consistent: bool
    consistent_lambda: float

    def as_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "a_from_lambda": self.a_from_lambda,
            "beta_sq_map": self.beta_sq_map,
            "beta_abs_paper": self.beta_abs_paper,
            "beta_abs_paper_sq": self.beta_abs_paper**2,
            "beta_riccati": {"re": self.beta_riccati.real, "im": self.beta_riccati.imag},
            "consistent": self.consistent,
            "consistent_lambda": self.consistent_lambda,
        }


def consistent_lambda() -> float:
    """Root of ``64 lam^2 - 16 (lam^2 + 1)`` on ``lam > 0``."""
    return brentq(lambda x: 64 * x**2 - 16 * (x**2 + 1), 1e-6, 10.0, xtol=1e-15)


def parameter_map(lam: float) -> MapReport:
    _check_positive(lam=lam)
    a = 4 * lam
    sq = 4 * a**2
    b = beta_abs(lam, "sqrt")
    return MapReport(
        lam=lam,
        a_from_lambda=a,
        beta_sq_map=sq,
        beta_abs_paper=b,
        beta_riccati=beta_for(lam),
        consistent=bool(abs(sq - b**2) <= 1e-12 * max(sq, b**2)),
        consistent_lambda=consistent_lambda(),
    )


ERROR_PROFILE_COLUMNS = (
    "r",
    "V_exact",
    "V_approx_Q20",
    "V_approx_consistent",
    "abs_err",
    "rel_err",
    "abs_err_consistent",
    "rel_err_consistent",
)


def error_profile(r_grid, p: YukawaParams, lam: float | None = None, beta: str | float = "map"):
    """Rows comparing exact and approximated potentials on ``r_grid`` (r <-> z).

    ``lam`` defaults to ``a/4``.  Returns a structured numpy array.
    """
    r = np.asarray(r_grid, dtype=float)
    if r.size == 0:
        raise EmptyGrid("r grid is empty")
    if np.any(r <= 0) or np.any(np.diff(r) <= 0):
        raise ValidationError("r grid must be positive and ascending")
    lam = p.a / 4 if lam is None else lam
    exact = yukawa_exact(r, p)
    q20 = yukawa_approx_z(r, lam, p.V0, beta)
    cons = yukawa_approx_consistent(r, lam, p.V0, beta)
    rows = np.empty(r.size, dtype=[(c, float) for c in ERROR_PROFILE_COLUMNS])
    rows["r"] = r
    rows["V_exact"] = exact
    rows["V_approx_Q20"] = q20
    rows["V_approx_consistent"] = cons
    rows["abs_err"] = np.abs(q20 - exact)
    rows["rel_err"] = np.abs(q20 - exact) / np.abs(exact)
    rows["abs_err_consistent"] = np.abs(cons - exact)
    rows["rel_err_consistent"] = np.abs(cons - exact) / np.abs(exact)
    return rows
