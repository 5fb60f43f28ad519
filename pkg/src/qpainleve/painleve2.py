"""Scalar quantum Painleve II on straight rays of the complex z-plane.

    f'' = 2 f^3 - 4 z f - 2i hbar f + c

is integrated as the first-order system (f, f') along ``z = z0 + s * d`` with
``|d| = 1`` and real arc parameter ``s`` in ``[0, length]``.  Two steppers are
available: classical fixed-step RK4 and the Dormand-Prince 5(4) pair with a
PI step-size controller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BlowUp, TooFewSamples, ValidationError
from .lax import SpectralParams

F_GUARD = 1e8
MIN_STEP_FRACTION = 1e-12


@dataclass(frozen=True)
class PIIState:
    z: complex
    f: complex
    fp: complex


@dataclass(frozen=True)
class RaySpec:
    """Ray ``z0 + s*direction`` for ``0 <= s <= length``.

    Exactly one of ``steps`` (fixed-step RK4) and ``tol`` (adaptive) is set.
    In adaptive mode ``samples`` requests output on a uniform grid of that many
    intervals; otherwise every accepted step is recorded.
    """

    z0: complex
    direction: complex
    length: float
    steps: int | None = None
    tol: float | None = None
    samples: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "z0", complex(self.z0))
        object.__setattr__(self, "direction", complex(self.direction))
        if abs(abs(self.direction) - 1.0) > 1e-12:
            raise ValidationError("ray direction must have unit modulus")
        if not self.length > 0:
            raise ValidationError("ray length must be positive")
        if (self.steps is None) == (self.tol is None):
            raise ValidationError("give exactly one of steps or tol")
        if self.steps is not None and self.steps < 1:
            raise ValidationError("steps must be a positive integer")
        if self.tol is not None and not self.tol > 0:
            raise ValidationError("tol must be positive")
        if self.samples is not None and self.samples < 1:
            raise ValidationError("samples must be a positive integer")

    def z_at(self, s):
        return self.z0 + np.asarray(s) * self.direction


@dataclass
class Trajectory:
    s: np.ndarray
    z: np.ndarray
    f: np.ndarray
    fp: np.ndarray

    def __len__(self) -> int:
        return len(self.s)

    def __getitem__(self, k: int) -> PIIState:
        return PIIState(complex(self.z[k]), complex(self.f[k]), complex(self.fp[k]))

    def __iter__(self):
        return (self[k] for k in range(len(self)))

    @property
    def direction(self) -> complex:
        return complex((self.z[-1] - self.z[0]) / (self.s[-1] - self.s[0]))

    def is_uniform(self, rtol: float = 1e-9) -> bool:
        ds = np.diff(self.s)
        return bool(np.all(np.abs(ds - ds[0]) <= rtol * abs(ds[0])))


def pii_rhs(s: PIIState, sp: SpectralParams) -> tuple[complex, complex]:
    """Derivatives (df/dz, df'/dz) of the QPII system."""
    f = s.f
    return s.fp, 2 * f**3 - 4 * s.z * f - 2j * sp.hbar * f + sp.c


def _field(sp: SpectralParams, ray: RaySpec):
    d, z0, c, q = ray.direction, ray.z0, sp.c, 2j * sp.hbar

    def deriv(s, y):
        f, fp = y
        z = z0 + s * d
        return np.array([d * fp, d * (2 * f**3 - 4 * z * f - q * f + c)])

    return deriv


def _rk4(deriv, y0, length, steps, guard_z):
    h = length / steps
    s = np.linspace(0.0, length, steps + 1)
    ys = np.empty((steps + 1, 2), dtype=complex)
    ys[0] = y = y0
    for k in range(steps):
        sk = s[k]
        k1 = deriv(sk, y)
        k2 = deriv(sk + h / 2, y + h / 2 * k1)
        k3 = deriv(sk + h / 2, y + h / 2 * k2)
        k4 = deriv(sk + h, y + h * k3)
        y_new = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(y_new)) or abs(y_new[0]) > F_GUARD:
            raise BlowUp(guard_z(sk))
        ys[k + 1] = y = y_new
    return s, ys


# Dormand-Prince 5(4) tableau
_C = np.array([0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1, 1])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0])
_B4 = np.array(
    [5179 / 57600, 0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)
_E = _B5 - _B4


def _dopri(deriv, y0, length, tol, samples, guard_z):
    safety, alpha, beta = 0.9, 0.7 / 5, 0.4 / 5
    h_min = MIN_STEP_FRACTION * length
    targets = (
        np.linspace(0.0, length, samples + 1)[1:] if samples else np.array([length])
    )
    out_s, out_y = [0.0], [y0]
    s, y = 0.0, y0
    k = np.empty((7, 2), dtype=complex)
    k[0] = deriv(s, y)
    h = min(length / 100, length)
    err_prev = 1.0
    ti = 0
    while ti < len(targets):
        target = targets[ti]
        h_try = min(h, target - s)
        hit = h_try >= target - s - 1e-15 * length
        for i in range(1, 7):
            k[i] = deriv(s + _C[i] * h_try, y + h_try * np.dot(_A[i], k[:i]))
        y_new = y + h_try * (_B5 @ k)
        err_vec = h_try * (_E @ k)
        scale = tol + tol * np.maximum(np.abs(y), np.abs(y_new))
        err = float(np.max(np.abs(err_vec) / scale)) if np.all(np.isfinite(y_new)) else np.inf
        if err <= 1.0:
            s = target if hit else s + h_try
            y = y_new
            k[0] = k[6]  # FSAL
            if abs(y[0]) > F_GUARD:
                raise BlowUp(guard_z(s))
            if samples is None or hit:
                out_s.append(s)
                out_y.append(y)
            if hit:
                ti += 1
            err = max(err, 1e-10)
            factor = safety * err**-alpha * err_prev**beta
            err_prev = err
            h_next = h_try * min(5.0, max(0.2, factor))
            # a step shortened to land on an output point should not shrink h
            h = max(h, h_next) if hit and h_try < h else h_next
        else:
            factor = safety * err**-alpha if np.isfinite(err) else 0.2
            h = h_try * max(0.2, min(1.0, factor))
        if h < h_min:
            raise BlowUp(guard_z(s), "step size collapsed")
    if samples is None and out_s[-1] != length:
        out_s.append(length)
        out_y.append(y)
    return np.array(out_s), np.array(out_y)


def integrate(initial: PIIState, ray: RaySpec, sp: SpectralParams) -> Trajectory:
    """Integrate from ``initial`` along ``ray``; raises BlowUp at a movable pole.

    ``initial.z`` is ignored in favour of ``ray.z0`` only if they disagree by
    less than 1e-12; otherwise the mismatch is rejected.
    """
    if abs(complex(initial.z) - ray.z0) > 1e-12 * max(1.0, abs(ray.z0)):
        raise ValidationError("initial.z must coincide with ray.z0")
    y0 = np.array([initial.f, initial.fp], dtype=complex)
    if not np.all(np.isfinite(y0)):
        raise ValidationError("initial state must be finite")
    deriv = _field(sp, ray)
    guard_z = lambda s: complex(ray.z_at(s))  # noqa: E731
    if ray.steps is not None:
        s, ys = _rk4(deriv, y0, ray.length, ray.steps, guard_z)
    else:
        s, ys = _dopri(deriv, y0, ray.length, ray.tol, ray.samples, guard_z)
    return Trajectory(s=s, z=ray.z_at(s), f=ys[:, 0].copy(), fp=ys[:, 1].copy())


def second_difference(values: np.ndarray, dz: complex) -> np.ndarray:
    """Central second difference at interior samples."""
    return (values[2:] - 2 * values[1:-1] + values[:-2]) / dz**2


def trajectory_residual(traj: Trajectory, sp: SpectralParams) -> np.ndarray:
    """FD estimate of f'' minus the QPII right-hand side at interior samples."""
    if len(traj) < 5:
        raise TooFewSamples(f"need at least 5 samples, got {len(traj)}")
    if not traj.is_uniform():
        raise ValidationError("trajectory samples must be uniformly spaced")
    dz = traj.z[1] - traj.z[0]
    f, z = traj.f[1:-1], traj.z[1:-1]
    rhs = 2 * f**3 - 4 * z * f - 2j * sp.hbar * f + sp.c
    return second_difference(traj.f, dz) - rhs


def derivative_from_fp(traj: Trajectory) -> np.ndarray:
    """Fourth-order central estimate of f'' from the f' samples.

    Returned on the samples ``2 .. n-3``; independent of the right-hand side.
    """
    if len(traj) < 5:
        raise TooFewSamples(f"need at least 5 samples, got {len(traj)}")
    dz = traj.z[1] - traj.z[0]
    g = traj.fp
    return (-g[4:] + 8 * g[3:-1] - 8 * g[1:-3] + g[:-4]) / (12 * dz)


def empirical_order(errors, refinements=2.0) -> float:
    """Observed convergence order from errors on successively halved steps."""
    e = np.asarray(errors, dtype=float)
    return float(np.mean(np.log(e[:-1] / e[1:]) / math.log(refinements)))
