"""Non-stationary Schrodinger reduction of quantum Painleve II.

With ``psi(x, t) = f(z) exp(i alpha t)`` and ``z = i kappa x``,
``kappa = sqrt(2m)/hbar``, the kinetic term ``-(hbar^2/2m) d^2/dx^2`` becomes
``+d^2/dz^2`` and the potential ``V = 4z - 2 f^2`` turns the PDE into an ODE
for f.  Which ODE depends on the sign in front of the time derivative:

``convention="reversed"``  ``-i hbar psi_t = H psi``  gives ``f'' = 2f^3 - 4zf + alpha hbar f``
``convention="standard"``  `` i hbar psi_t = H psi``  gives ``f'' = 2f^3 - 4zf - alpha hbar f``

so matching QPII (``-2i hbar f``) needs ``alpha = -2i`` in the first case and
``alpha = +2i`` in the second.  ``reduction_residual`` writes the ODE as
``f'' - (2f^3 - 4zf - s alpha hbar f)`` with ``s = -1`` (reversed) or ``+1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.linalg import LinAlgError, solve_banded

from .errors import GridMismatch, NearPole, SingularStep, TooFewSamples, ValidationError
from .painleve2 import Trajectory, second_difference
from .riccati import DEFAULT_GUARD, PoleGuard, beta_for, closed_form_f

CONVENTIONS = {"reversed": -1, "standard": +1}
DEFAULT_CONVENTION = "reversed"


def reduction_sign(convention: str = DEFAULT_CONVENTION) -> int:
    try:
        return CONVENTIONS[convention]
    except KeyError:
        raise ValidationError(f"unknown convention {convention!r}") from None


def matched_alpha(convention: str = DEFAULT_CONVENTION) -> complex:
    """Ansatz frequency for which the reduction reproduces QPII."""
    return 2j * reduction_sign(convention)


@dataclass(frozen=True)
class PhysicalParams:
    mass: float = 0.5
    hbar: float = 1.0
    alpha: complex | None = None
    lam: complex = 1.0
    convention: str = DEFAULT_CONVENTION

    def __post_init__(self):
        if not (self.mass > 0 and self.hbar > 0):
            raise ValidationError("mass and hbar must be positive")
        reduction_sign(self.convention)
        alpha = matched_alpha(self.convention) if self.alpha is None else self.alpha
        object.__setattr__(self, "alpha", complex(alpha))
        object.__setattr__(self, "lam", complex(self.lam))

    @property
    def kappa(self) -> float:
        return float(np.sqrt(2 * self.mass) / self.hbar)

    @property
    def kinetic(self) -> float:
        return self.hbar**2 / (2 * self.mass)


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if self.n < 16:
            raise ValidationError("grid needs at least 16 points")
        if not self.x_max > self.x_min:
            raise ValidationError("x_max must exceed x_min")

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)


@dataclass
class WaveField:
    grid: GridSpec
    t: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.grid.n,):
            raise GridMismatch("values do not match the grid size")
        if not np.all(np.isfinite(self.values)):
            raise ValidationError("wave field has non-finite samples")

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.dx))


def x_to_z(x, p: PhysicalParams):
    return 1j * p.kappa * np.asarray(x, dtype=float)


def closed_form_poles_x(lam: float, p: PhysicalParams, x_min: float, x_max: float):
    """Real-x poles of the closed form on the ray z = i kappa x (real lambda)."""
    step = np.pi / (4 * abs(lam) * p.kappa)
    k = np.arange(np.ceil(x_min / step), np.floor(x_max / step) + 1)
    return k * step


def make_grid(x_min, x_max, n, p: PhysicalParams, check_poles: bool = True) -> GridSpec:
    """Grid builder that refuses windows within 10 dx of a closed-form pole."""
    grid = GridSpec(x_min, x_max, n)
    lam = p.lam
    if check_poles and lam.imag == 0 and lam.real != 0:
        margin = 10 * grid.dx
        poles = closed_form_poles_x(lam.real, p, x_min - margin, x_max + margin)
        if len(poles):
            raise NearPole(complex(x_to_z(poles[0], p)))
    return grid


FSource = Callable[[np.ndarray], np.ndarray]


def closed_form_source(lam, beta=None, guard: PoleGuard = DEFAULT_GUARD) -> FSource:
    beta = beta_for(lam) if beta is None else beta
    return lambda z: closed_form_f(z, lam, beta, guard)


def trajectory_source(traj: Trajectory) -> FSource:
    """Cubic Hermite interpolant of (f, f') along the trajectory's ray."""
    d = traj.direction
    s_nodes = traj.s

    def source(z):
        z = np.asarray(z, dtype=complex)
        s = ((z - traj.z[0]) / d).real
        if np.any(s < s_nodes[0] - 1e-9) or np.any(s > s_nodes[-1] + 1e-9):
            raise ValidationError("point outside the trajectory's ray segment")
        k = np.clip(np.searchsorted(s_nodes, s, side="right") - 1, 0, len(s_nodes) - 2)
        h = s_nodes[k + 1] - s_nodes[k]
        t = (s - s_nodes[k]) / h
        h00 = 2 * t**3 - 3 * t**2 + 1
        h10 = t**3 - 2 * t**2 + t
        h01 = -2 * t**3 + 3 * t**2
        h11 = t**3 - t**2
        # df/ds = d * f'
        return (
            h00 * traj.f[k]
            + h10 * h * d * traj.fp[k]
            + h01 * traj.f[k + 1]
            + h11 * h * d * traj.fp[k + 1]
        )

    return source


def potential_V(z, f_source: FSource):
    """``4z - 2 f(z)^2``."""
    z = np.asarray(z, dtype=complex)
    return 4 * z - 2 * f_source(z) ** 2


def potential_on_grid(grid: GridSpec, p: PhysicalParams, f_source: FSource) -> np.ndarray:
    return potential_V(x_to_z(grid.x, p), f_source)


def ansatz_psi(x, t, p: PhysicalParams, f_source: FSource):
    """``f(z(x)) exp(i alpha t)``."""
    return f_source(x_to_z(x, p)) * np.exp(1j * p.alpha * t)


def ansatz_field(grid: GridSpec, t: float, p: PhysicalParams, f_source: FSource) -> WaveField:
    return WaveField(grid, t, ansatz_psi(grid.x, t, p, f_source))


def reduction_residual(traj: Trajectory, alpha: complex, hbar: float, sign: int | None = None):
    """``f'' - (2f^3 - 4zf - sign*alpha*hbar*f)`` at interior samples, f'' by FD."""
    if sign is None:
        sign = reduction_sign(DEFAULT_CONVENTION)
    if sign not in (-1, 1):
        raise ValidationError("sign must be +1 or -1")
    if len(traj) < 5:
        raise TooFewSamples(f"need at least 5 samples, got {len(traj)}")
    if not traj.is_uniform():
        raise ValidationError("trajectory samples must be uniformly spaced")
    dz = traj.z[1] - traj.z[0]
    f, z = traj.f[1:-1], traj.z[1:-1]
    rhs = 2 * f**3 - 4 * z * f - sign * alpha * hbar * f
    return second_difference(traj.f, dz) - rhs


def pde_residual_fd(fields, V, p: PhysicalParams) -> WaveField:
    """Residual ``s_t i hbar psi_t - (-(hbar^2/2m) psi_xx + V psi)`` on interior nodes.

    ``fields`` are three WaveFields at ``t - dt, t, t + dt``; ``s_t = -1`` for the
    reversed convention.  Boundary entries of the result are zero.
    """
    prev, mid, nxt = fields
    if not (prev.grid == mid.grid == nxt.grid):
        raise GridMismatch("fields live on different grids")
    dt1, dt2 = mid.t - prev.t, nxt.t - mid.t
    if not dt1 > 0 or abs(dt1 - dt2) > 1e-12 * max(dt1, dt2):
        raise GridMismatch("time levels must be equally spaced and increasing")
    V = np.broadcast_to(np.asarray(V, dtype=complex), (mid.grid.n,))
    dx = mid.grid.dx
    psi = mid.values
    psi_t = (nxt.values - prev.values) / (2 * dt1)
    psi_xx = second_difference(psi, dx)
    s_t = reduction_sign(p.convention)
    res = np.zeros_like(psi)
    res[1:-1] = (
        s_t * 1j * p.hbar * psi_t[1:-1]
        - (-p.kinetic * psi_xx + V[1:-1] * psi[1:-1])
    )
    return WaveField(mid.grid, mid.t, res)


def propagate_cn(
    initial: WaveField,
    V,
    dt: float,
    steps: int,
    p: PhysicalParams,
    boundary: Callable[[float], tuple[complex, complex]] | None = None,
) -> WaveField:
    """Crank-Nicolson propagation with Dirichlet ends.

    Standard convention: ``(I + i dt/(2 hbar) H) psi_{k+1} = (I - i dt/(2 hbar) H) psi_k``;
    the reversed convention flips the sign of ``i``.  ``boundary(t)`` pins the end
    values (default zero).
    """
    if not dt > 0 or steps < 0:
        raise ValidationError("dt must be positive and steps non-negative")
    grid = initial.grid
    n, dx = grid.n, grid.dx
    V = np.broadcast_to(np.asarray(V, dtype=complex), (n,))
    s_t = reduction_sign(p.convention)
    mu = s_t * 1j * dt / (2 * p.hbar)
    k = p.kinetic / dx**2
    diag_h = 2 * k + V[1:-1]
    # banded form of (I + mu H) on the interior
    ab = np.zeros((3, n - 2), dtype=complex)
    ab[0, 1:] = -mu * k
    ab[1, :] = 1 + mu * diag_h
    ab[2, :-1] = -mu * k
    psi = initial.values.copy()
    t = initial.t
    if boundary is None:
        boundary = lambda _t: (0j, 0j)  # noqa: E731
    left, right = boundary(t)
    psi[0], psi[-1] = left, right
    for _ in range(steps):
        inner = psi[1:-1]
        h_psi = diag_h * inner
        h_psi[1:] -= k * inner[:-1]
        h_psi[:-1] -= k * inner[1:]
        h_psi[0] -= k * psi[0]
        h_psi[-1] -= k * psi[-1]
        rhs = inner - mu * h_psi
        t_next = t + dt
        left, right = boundary(t_next)
        # boundary couplings of (I + mu H) at the new level move to the right
        rhs[0] += mu * k * left
        rhs[-1] += mu * k * right
        try:
            new_inner = solve_banded((1, 1), ab, rhs, check_finite=False)
        except (LinAlgError, ValueError) as exc:
            raise SingularStep(str(exc)) from exc
        if not np.all(np.isfinite(new_inner)):
            raise SingularStep("non-finite values after tridiagonal solve")
        psi = np.concatenate(([left], new_inner, [right]))
        t = t_next
    return WaveField(grid, t, psi)


def gaussian_packet(x, t, sigma=1.0, k0=0.0, x0=0.0, p: PhysicalParams | None = None):
    """Analytic free packet for ``i hbar psi_t = -(hbar^2/2m) psi_xx``.

    In the reversed convention time runs backwards relative to the standard one.
    """
    p = p or PhysicalParams()
    t_std = t if p.convention == "standard" else -t
    nu = p.hbar / p.mass
    v = nu * k0
    st2 = sigma**2 + 1j * nu * t_std
    x = np.asarray(x, dtype=float)
    return (
        np.sqrt(sigma**2 / st2)
        * np.exp(-((x - x0 - v * t_std) ** 2) / (2 * st2))
        * np.exp(1j * k0 * (x - x0 - v * t_std / 2))
    )
