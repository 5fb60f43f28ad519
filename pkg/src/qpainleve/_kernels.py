"""Sequential inner loops for the radial solvers (numba-compiled)."""

import numba
import numpy as np

_RESCALE = 1e150


@numba.njit(cache=True)
def numerov_nodes(w, h, energy, g0u0):
    """Node count of the outward Numerov solution of ``u'' = (w - E) u``.

    ``w[i]`` is the effective potential at ``r_i = i*h`` (``w[0]`` unused),
    ``u_0 = 0``, ``u_1 = 1`` and ``g0u0`` is the finite limit of
    ``(E - w) u`` at the origin (per unit ``u_1``).
    """
    n = w.shape[0]
    c = h * h / 12.0
    fu_prev = c * g0u0
    u_cur = 1.0
    f_cur = 1.0 + c * (energy - w[1])
    nodes = 0
    for i in range(1, n - 1):
        f_next = 1.0 + c * (energy - w[i + 1])
        u_next = ((12.0 - 10.0 * f_cur) * u_cur - fu_prev) / f_next
        if (u_next < 0.0) != (u_cur < 0.0):
            nodes += 1
        if abs(u_next) > _RESCALE:
            u_next /= _RESCALE
            u_cur /= _RESCALE
        fu_prev = f_cur * u_cur
        u_cur = u_next
        f_cur = f_next
    return nodes


@numba.njit(cache=True)
def numerov_wave(w, h, energy, g0u0):
    n = w.shape[0]
    c = h * h / 12.0
    u = np.zeros(n)
    u[1] = 1.0
    fu_prev = c * g0u0
    f_cur = 1.0 + c * (energy - w[1])
    for i in range(1, n - 1):
        f_next = 1.0 + c * (energy - w[i + 1])
        u[i + 1] = ((12.0 - 10.0 * f_cur) * u[i] - fu_prev) / f_next
        if abs(u[i + 1]) > _RESCALE:
            u[: i + 2] /= _RESCALE
        fu_prev = f_cur * u[i]
        f_cur = f_next
    return u


@numba.njit(cache=True)
def sturm_count(diag, off_sq, x):
    """Number of eigenvalues below ``x`` of the symmetric tridiagonal matrix
    with diagonal ``diag`` and constant squared off-diagonal ``off_sq``."""
    count = 0
    q = 1.0
    for i in range(diag.shape[0]):
        if i == 0:
            q = diag[0] - x
        else:
            q = diag[i] - x - off_sq / q
        if q == 0.0:
            q = -1e-300
        if q < 0.0:
            count += 1
    return count


@numba.njit(cache=True)
def sturm_count_laplacian(h2w, h2x):
    """Sturm count for ``(1/h^2) tridiag(-1, 2, -1) + diag(w)`` below ``x``.

    Works with ``p_i = h^2 q_i - 1`` where ``q_i`` are the LDL^T pivots, so the
    large ``2/h^2`` diagonal never enters a subtraction:
    ``p_1 = 1 + h^2 (w_1 - x)``, ``p_i = h^2 (w_i - x) + p_{i-1}/(1 + p_{i-1})``.
    Inputs are pre-scaled: ``h2w = h^2 w``, ``h2x = h^2 x``.
    """
    count = 0
    p = 0.0
    for i in range(h2w.shape[0]):
        if i == 0:
            p = 1.0 + (h2w[0] - h2x)
        else:
            p = (h2w[i] - h2x) + p / (1.0 + p)
        if p == -1.0:
            p = -1.0 - 1e-300
        if p < -1.0:
            count += 1
    return count
