"""Radial bound states in units hbar = 2m = 1.

Solves ``-u'' + [V(r) + l(l+1) C(r)] u = E u`` with ``u(0) = u(r_max) = 0``,
where ``C(r)`` is either ``1/r^2`` or the centrifugal approximation
``4a^2 e^{-2ar}/(1 - e^{-2ar})^2``.  Two independent routes are provided:
Numerov shooting with node-count bisection, and the 3-point finite-difference
matrix with Sturm-sequence bisection.  Closed forms exist for Coulomb
(``E_n = -V0^2/(4 n^2)``) and for s-wave Hulthen (see ``hulthen_analytic_s``).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import numpy as np
from scipy.linalg import solve_banded

from . import _kernels
from .errors import GridTooCoarse, NoBoundState, ValidationError
from .yukawa import beta_abs, centrifugal_approx

ENERGY_TOL = 1e-12
GRID_TOL = 1e-6


# -- potential families -------------------------------------------------------


@dataclass(frozen=True)
class Coulomb:
    V0: float
    kind = "coulomb"

    def __call__(self, r):
        return -self.V0 / r

    @property
    def origin_strength(self) -> float:
        """``lim r V(r)`` as ``r -> 0``."""
        return -self.V0

    screening = None


@dataclass(frozen=True)
class Yukawa:
    V0: float
    a: float
    kind = "yukawa"

    def __call__(self, r):
        return -self.V0 * np.exp(-2 * self.a * r) / r

    @property
    def origin_strength(self) -> float:
        return -self.V0

    @property
    def screening(self) -> float:
        return self.a


@dataclass(frozen=True)
class Hulthen:
    """Plain Hulthen well ``-W e^{-delta r}/(1 - e^{-delta r})``."""

    W: float
    delta: float
    kind = "hulthen"

    def __call__(self, r):
        return self.W * np.exp(-self.delta * r) / np.expm1(-self.delta * r)

    @property
    def origin_strength(self) -> float:
        return -self.W / self.delta

    @property
    def screening(self) -> float:
        return self.delta / 2


@dataclass(frozen=True)
class HulthenApprox:
    """Approximated Yukawa ``-V0 |beta| e^{-8 lam r}/(1 - e^{-8 lam r})``."""

    V0: float
    lam: float
    beta: str = "map"
    kind = "hulthen-approx"

    @property
    def strength(self) -> float:
        return self.V0 * beta_abs(self.lam, self.beta)

    def __call__(self, r):
        return self.strength * np.exp(-8 * self.lam * r) / np.expm1(-8 * self.lam * r)

    @property
    def origin_strength(self) -> float:
        return -self.strength / (8 * self.lam)

    @property
    def screening(self) -> float:
        return 4 * self.lam


@dataclass(frozen=True)
class HulthenConsistent(HulthenApprox):
    """Variant with numerator ``e^{-12 lam r}``."""

    kind = "hulthen-consistent"

    def __call__(self, r):
        return self.strength * np.exp(-12 * self.lam * r) / np.expm1(-8 * self.lam * r)


def _validate_potential(pot) -> None:
    for name in ("V0", "a", "lam", "W", "delta"):
        v = getattr(pot, name, None)
        if v is not None and not v > 0:
            raise ValidationError(f"{type(pot).__name__}.{name} must be positive")


@dataclass(frozen=True)
class RadialSpec:
    potential: object
    l: int = 0
    centrifugal: str = "exact"

    def __post_init__(self):
        _validate_potential(self.potential)
        if self.l < 0:
            raise ValidationError("l must be non-negative")
        if self.centrifugal not in ("exact", "greene_aldrich"):
            raise ValidationError(f"unknown centrifugal mode {self.centrifugal!r}")
        if self.centrifugal == "greene_aldrich" and self.potential.screening is None:
            raise ValidationError("greene_aldrich mode needs a screened potential")

    def effective(self, r: np.ndarray) -> np.ndarray:
        w = np.asarray(self.potential(r), dtype=float)
        if self.l:
            ll = self.l * (self.l + 1)
            if self.centrifugal == "exact":
                w = w + ll / r**2
            else:
                w = w + ll * centrifugal_approx(r, self.potential.screening)
        return w

    def coulomb_estimate(self, n_radial: int) -> float:
        z = -self.potential.origin_strength
        return -(z**2) / (4 * (n_radial + self.l + 1) ** 2)


@dataclass(frozen=True)
class RadialGrid:
    r_max: float
    n: int

    def __post_init__(self):
        if not self.r_max > 0:
            raise ValidationError("r_max must be positive")
        if self.n < 1000:
            raise ValidationError("radial grid needs n >= 1000")

    @property
    def h(self) -> float:
        return self.r_max / self.n

    @property
    def r(self) -> np.ndarray:
        return self.h * np.arange(self.n + 1)

    def refined(self) -> "RadialGrid":
        return RadialGrid(self.r_max, 2 * self.n)

    def describe(self) -> str:
        return f"uniform r_max={self.r_max:g} n={self.n} h={self.h:.3e}"


def default_grid(spec: RadialSpec, n_radial: int = 0) -> RadialGrid:
    """Uniform grid sized from the Coulomb estimate of the requested level.

    ``r_max = 40/min(a, k)`` with ``k = sqrt(|E_coulomb|)``, capped at
    ``max(40/k, 16/k^2)`` so weakly screened potentials stay at desk size.
    The step is ``2.5e-3/Z`` (``Z = -lim r V``), shrunk by a further ``1/Z``
    for deep wells so the absolute O(h^2) error stays below 1e-7.
    """
    z = -spec.potential.origin_strength
    k = math.sqrt(-spec.coulomb_estimate(n_radial))
    a = spec.potential.screening
    r_max = 40 / min(a, k) if a else 40 / k
    r_max = min(r_max, max(40 / k, 16 / k**2))
    h = 2.5e-3 / z * min(1.0, 1.0 / z)
    return RadialGrid(r_max, max(1000, int(math.ceil(r_max / h))))


@dataclass(frozen=True)
class EigenResult:
    n_radial: int
    l: int
    energy: float
    method: str
    grid_meta: str = ""
    extra: dict = field(default_factory=dict, compare=False)

    def as_dict(self) -> dict:
        return {
            "n_radial": self.n_radial,
            "l": self.l,
            "energy": self.energy,
            "method": self.method,
            "grid_meta": self.grid_meta,
        }


def energy_window(spec: RadialSpec) -> tuple[float, float]:
    z = -spec.potential.origin_strength
    return -10.0 * max(z, getattr(spec.potential, "V0", z)) ** 2, -1e-12


# -- Numerov -----------------------------------------------------------------


def _origin_limit(spec: RadialSpec, h: float) -> float:
    """Limit of ``(E - w(r)) u(r)`` at r = 0 for ``u(h) = 1``."""
    if spec.l == 0:
        return -spec.potential.origin_strength / h
    if spec.l == 1:
        return -2.0 / h**2
    return 0.0


def _numerov_setup(spec: RadialSpec, grid: RadialGrid):
    r = grid.r
    w = np.empty_like(r)
    w[0] = 0.0
    w[1:] = spec.effective(r[1:])
    return w, grid.h, _origin_limit(spec, grid.h)


def _bisect(count, target: int, lo: float, hi: float) -> tuple[float, float]:
    """Shrink ``[lo, hi]`` around the energy where ``count`` first exceeds ``target``."""
    while hi - lo > ENERGY_TOL * max(1.0, abs(lo)):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if count(mid) > target:
            hi = mid
        else:
            lo = mid
    return lo, hi


def _numerov_once(spec: RadialSpec, n_target: int, grid: RadialGrid) -> tuple[float, int]:
    w, h, g0 = _numerov_setup(spec, grid)
    count = lambda e: _kernels.numerov_nodes(w, h, e, g0)  # noqa: E731
    lo, hi = energy_window(spec)
    if count(lo) > n_target:
        raise NoBoundState(f"energy window too shallow for n_radial={n_target}")
    if count(hi) <= n_target:
        raise NoBoundState(f"no bound state with {n_target} nodes (l={spec.l})")
    lo, hi = _bisect(count, n_target, lo, hi)
    return 0.5 * (lo + hi), count(lo)


def solve_numerov(
    spec: RadialSpec, n_target: int, grid: RadialGrid | None = None, check_grid: bool = True
) -> EigenResult:
    """Bound state with exactly ``n_target`` interior nodes by Numerov shooting."""
    if n_target < 0:
        raise ValidationError("n_target must be non-negative")
    grid = grid or default_grid(spec, n_target)
    energy, nodes = _numerov_once(spec, n_target, grid)
    if check_grid:
        fine = grid.refined()
        e_fine, nodes = _numerov_once(spec, n_target, fine)
        if abs(e_fine - energy) > GRID_TOL:
            raise GridTooCoarse(f"doubling n moved E by {abs(e_fine - energy):.2e}")
        energy, grid = e_fine, fine
    return EigenResult(nodes, spec.l, energy, "numerov", grid.describe())


def numerov_wavefunction(spec: RadialSpec, energy: float, grid: RadialGrid) -> np.ndarray:
    w, h, g0 = _numerov_setup(spec, grid)
    return _kernels.numerov_wave(w, h, energy, g0)


# -- finite-difference matrix ------------------------------------------------


def fd_matrix(spec: RadialSpec, grid: RadialGrid) -> tuple[np.ndarray, float]:
    """Diagonal and squared off-diagonal of the 3-point Hamiltonian on r_1..r_{n-1}."""
    h = grid.h
    r = grid.r[1:-1]
    return 2.0 / h**2 + spec.effective(r), 1.0 / h**4


def fd_sturm_counter(spec: RadialSpec, grid: RadialGrid):
    """``x -> #{eigenvalues of the FD matrix below x}``.

    Uses the pivot recurrence scaled by h^2 so that energies far below the
    ``2/h^2`` diagonal keep full precision on fine grids.
    """
    h2 = grid.h**2
    h2w = h2 * spec.effective(grid.r[1:-1])
    return lambda x: _kernels.sturm_count_laplacian(h2w, h2 * x)


def count_nodes(u: np.ndarray, rel_floor: float = 1e-8) -> int:
    """Sign changes of ``u`` ignoring samples below ``rel_floor * max|u|``."""
    u = np.asarray(u)
    big = u[np.abs(u) > rel_floor * np.max(np.abs(u))]
    return int(np.count_nonzero(np.signbit(big[1:]) != np.signbit(big[:-1])))


def fd_eigenvector(diag: np.ndarray, off: float, energy: float, iterations: int = 3):
    """Inverse iteration on the tridiagonal matrix with shift ``energy``."""
    n = diag.size
    ab = np.empty((3, n))
    ab[0, :] = off
    ab[2, :] = off
    shift = energy - 1e-9 * max(1.0, abs(energy))
    ab[1, :] = diag - shift
    v = np.ones(n) / math.sqrt(n)
    for _ in range(iterations):
        v = solve_banded((1, 1), ab, v, check_finite=False)
        v /= np.linalg.norm(v)
    return v


def _fd_once(spec: RadialSpec, k: int, grid: RadialGrid) -> list[float]:
    count = fd_sturm_counter(spec, grid)
    lo_w, hi_w = energy_window(spec)
    n_bound = min(k, count(hi_w))
    energies = []
    lo = lo_w
    if count(lo) > 0:
        raise NoBoundState("energy window too shallow for the ground state")
    for j in range(n_bound):
        lo, hi = _bisect(count, j, lo, hi_w)
        energies.append(0.5 * (lo + hi))
    return energies


def solve_fd_matrix(
    spec: RadialSpec, k: int, grid: RadialGrid | None = None, check_grid: bool = True
) -> list[EigenResult]:
    """The ``k`` lowest bound levels (E < 0) of the finite-difference matrix."""
    if k < 0:
        raise ValidationError("k must be non-negative")
    if k == 0:
        return []
    grid = grid or default_grid(spec, k - 1)
    energies = _fd_once(spec, k, grid)
    if check_grid and energies:
        fine = grid.refined()
        fine_e = _fd_once(spec, k, fine)
        shifts = [abs(a - b) for a, b in zip(energies, fine_e)]
        if len(fine_e) != len(energies) or max(shifts) > GRID_TOL:
            raise GridTooCoarse(f"doubling n moved levels by up to {max(shifts):.2e}")
        energies, grid = fine_e, fine
    diag, off_sq = fd_matrix(spec, grid)
    results = []
    for e in energies:
        nodes = count_nodes(fd_eigenvector(diag, -math.sqrt(off_sq), e))
        results.append(EigenResult(nodes, spec.l, e, "fd_matrix", grid.describe()))
    return results


# -- closed forms ------------------------------------------------------------


def coulomb_energy(V0: float, n: int) -> float:
    """``-V0^2 / (4 n^2)`` with principal quantum number ``n >= 1``."""
    return -(V0**2) / (4 * n**2)


def _hulthen_formula(W: float, delta: float, n: int) -> float:
    if W <= (n * delta) ** 2:
        raise NoBoundState(f"Hulthen level n={n} needs W > n^2 delta^2")
    return -(((W - (n * delta) ** 2) / (2 * n * delta)) ** 2)


VALIDATION_TOL = 1e-5


@lru_cache(maxsize=1)
def hulthen_validation_table() -> list[dict]:
    """Shipped table of formula-vs-fd_matrix checks; refuses to load if any row fails."""
    text = resources.files("qpainleve").joinpath("data/hulthen_validation.json").read_text()
    rows = json.loads(text)["rows"]
    if len(rows) < 5:
        raise RuntimeError("Hulthen validation table has fewer than 5 tuples")
    for row in rows:
        formula = _hulthen_formula(row["W"], row["delta"], row["n"])
        if abs(formula - row["fd_energy"]) > VALIDATION_TOL:
            raise RuntimeError(f"Hulthen formula failed validation on {row}")
    return rows


def hulthen_analytic_s(V0_eff: float, delta: float, n: int) -> float:
    """s-wave energy of ``-V0_eff e^{-delta r}/(1 - e^{-delta r})``.

    With ``y = e^{-delta r}`` the radial equation becomes hypergeometric; the
    quantisation condition gives ``E_n = -((V0_eff - n^2 delta^2)/(2 n delta))^2``
    for ``n = 1, 2, ...`` provided ``V0_eff > n^2 delta^2``.
    """
    if n < 1:
        raise ValidationError("n must be >= 1")
    if not (V0_eff > 0 and delta > 0):
        raise ValidationError("V0_eff and delta must be positive")
    hulthen_validation_table()
    return _hulthen_formula(V0_eff, delta, n)


def analytic_energy(spec: RadialSpec, n_radial: int) -> EigenResult | None:
    """Closed-form level when one exists for this spec, else None."""
    pot = spec.potential
    if isinstance(pot, Coulomb) and spec.centrifugal == "exact":
        e = coulomb_energy(pot.V0, n_radial + spec.l + 1)
        return EigenResult(n_radial, spec.l, e, "analytic_coulomb")
    if spec.l == 0 and (isinstance(pot, Hulthen) or type(pot) is HulthenApprox):
        W, delta = (pot.W, pot.delta) if isinstance(pot, Hulthen) else (pot.strength, 8 * pot.lam)
        return EigenResult(n_radial, 0, hulthen_analytic_s(W, delta, n_radial + 1), "analytic_hulthen")
    return None


# -- comparison ---------------------------------------------------------------

COMPARE_COLUMNS = ("n_radial", "l", "E_A", "E_B", "abs_diff", "rel_diff")


def compare_spectra(spec_a, spec_b, levels, grid: RadialGrid | None = None, method: str = "numerov"):
    """Rows (n_radial, l, E_A, E_B, abs_diff, rel_diff); missing levels give None.

    ``spec_a``/``spec_b`` are potentials; the ``l`` of each level is applied to
    both.  ``rel_diff`` is relative to ``|E_A|``.
    """
    if method not in ("numerov", "fd_matrix"):
        raise ValidationError(f"unknown method {method!r}")

    def level(pot, centrifugal, n, l):
        spec = RadialSpec(pot, l, centrifugal)
        try:
            if method == "numerov":
                return solve_numerov(spec, n, grid).energy
            res = solve_fd_matrix(spec, n + 1, grid)
            return res[n].energy if len(res) > n else None
        except NoBoundState:
            return None

    def unpack(s):
        return (s.potential, s.centrifugal) if isinstance(s, RadialSpec) else (s, "exact")

    (pa, ca), (pb, cb) = unpack(spec_a), unpack(spec_b)
    rows = []
    for n, l in sorted(levels, key=lambda nl: (nl[1], nl[0])):
        ea, eb = level(pa, ca, n, l), level(pb, cb, n, l)
        if ea is None or eb is None:
            rows.append({"n_radial": n, "l": l, "E_A": ea, "E_B": eb, "abs_diff": None, "rel_diff": None})
            continue
        d = abs(ea - eb)
        rows.append({"n_radial": n, "l": l, "E_A": ea, "E_B": eb, "abs_diff": d, "rel_diff": d / abs(ea)})
    return rows
