import json
from importlib import resources

import numpy as np
import pytest

from qpainleve import radial
from qpainleve.errors import GridTooCoarse, NoBoundState, ValidationError
from qpainleve.radial import (
    Coulomb,
    Hulthen,
    HulthenApprox,
    HulthenConsistent,
    RadialGrid,
    RadialSpec,
    Yukawa,
    analytic_energy,
    compare_spectra,
    count_nodes,
    hulthen_analytic_s,
    numerov_wavefunction,
    solve_fd_matrix,
    solve_numerov,
)

FAMILIES = [
    Coulomb(1.0),
    Yukawa(1.0, 0.05),
    Hulthen(0.2, 0.1),
    HulthenApprox(1.0, 0.0125),
]


def bound_levels(spec, k):
    return solve_fd_matrix(spec, k)


@pytest.mark.parametrize("n,l,expected", [(0, 0, -0.25), (1, 0, -0.0625), (0, 1, -0.0625)])
def test_coulomb_levels(n, l, expected):
    assert solve_numerov(RadialSpec(Coulomb(1.0), l), n).energy == pytest.approx(expected, abs=1e-5)


def test_coulomb_ground_state_scales_with_strength():
    for V0 in (0.5, 2.0):
        assert solve_numerov(RadialSpec(Coulomb(V0)), 0).energy == pytest.approx(-(V0**2) / 4, abs=1e-5)


@pytest.mark.parametrize("pot", FAMILIES, ids=lambda p: p.kind)
@pytest.mark.parametrize("l", [0, 1])
def test_numerov_and_fd_agree(pot, l):
    spec = RadialSpec(pot, l)
    levels = bound_levels(spec, 3)
    assert levels
    for lev in levels:
        assert solve_numerov(spec, lev.n_radial).energy == pytest.approx(lev.energy, abs=1e-6)


@pytest.mark.parametrize("pot", FAMILIES[:3], ids=lambda p: p.kind)
def test_node_theorem(pot):
    spec = RadialSpec(pot)
    levels = bound_levels(spec, 3)
    assert [lev.n_radial for lev in levels] == list(range(len(levels)))
    for lev in levels:
        res = solve_numerov(spec, lev.n_radial)
        grid = radial.default_grid(spec, lev.n_radial)
        u = numerov_wavefunction(spec, res.energy, grid)
        # the outward solution diverges past the last node-free region; count up to its minimum
        stop = int(np.argmin(np.abs(u[len(u) // 10 :]))) + len(u) // 10
        assert count_nodes(u[:stop]) == lev.n_radial


def test_energies_ordered():
    spec = RadialSpec(Coulomb(1.0))
    energies = [lev.energy for lev in bound_levels(spec, 3)]
    assert energies == sorted(energies)


def test_deeper_well_binds_more():
    e = [solve_numerov(RadialSpec(Yukawa(V0, 0.1)), 0).energy for V0 in (0.8, 1.0, 1.2)]
    assert e[0] > e[1] > e[2]


def test_screening_raises_energy():
    e = [solve_numerov(RadialSpec(Yukawa(1.0, a)), 0).energy for a in (0.025, 0.05, 0.1)]
    assert e[0] < e[1] < e[2]


def test_coulomb_limit_of_yukawa():
    screens = (0.1, 0.05, 0.025)
    gaps = [solve_numerov(RadialSpec(Yukawa(1.0, a)), 0).energy + 0.25 for a in screens]
    assert gaps[0] > gaps[1] > gaps[2] > 0
    # e^{-2ar} >= 1 - 2ar bounds the shift by 2 a V0
    assert all(g <= 2 * a for g, a in zip(gaps, screens))


def test_greene_aldrich_mode_for_p_wave():
    pot = Yukawa(1.0, 0.01)
    exact = solve_numerov(RadialSpec(pot, 1), 0).energy
    approx = solve_numerov(RadialSpec(pot, 1, "greene_aldrich"), 0).energy
    assert abs(approx - exact) <= 0.01 * abs(exact)


def test_strong_screening_has_no_bound_state():
    with pytest.raises(NoBoundState):
        solve_numerov(RadialSpec(Yukawa(1.0, 0.4)), 0)
    assert solve_fd_matrix(RadialSpec(Yukawa(1.0, 0.4)), 1) == []


def test_missing_excited_level():
    with pytest.raises(NoBoundState):
        solve_numerov(RadialSpec(Yukawa(1.0, 0.05), 1), 1)


def test_coarse_grid_detected():
    with pytest.raises(GridTooCoarse):
        solve_numerov(RadialSpec(Coulomb(10.0)), 0, RadialGrid(4.0, 1000))
    with pytest.raises(GridTooCoarse):
        solve_fd_matrix(RadialSpec(Coulomb(10.0)), 1, RadialGrid(4.0, 1000))


def test_hulthen_fixture_rows_reproduce():
    rows = json.loads(resources.files("qpainleve").joinpath("data/hulthen_validation.json").read_text())["rows"]
    assert len(rows) >= 5
    for row in rows[:3]:
        spec = RadialSpec(Hulthen(row["W"], row["delta"]))
        fd = solve_fd_matrix(spec, row["n"])[row["n"] - 1].energy
        assert fd == pytest.approx(row["fd_energy"], abs=1e-7)
        assert hulthen_analytic_s(row["W"], row["delta"], row["n"]) == pytest.approx(fd, abs=1e-5)


def test_hulthen_formula_example():
    assert hulthen_analytic_s(2.0, 0.2, 1) == pytest.approx(-24.01, rel=1e-12)
    assert hulthen_analytic_s(1.0, 0.1, 2) == pytest.approx(-((1 - 0.04) / 0.4) ** 2)


def test_hulthen_formula_threshold():
    with pytest.raises(NoBoundState):
        hulthen_analytic_s(0.01, 0.2, 1)
    with pytest.raises(ValidationError):
        hulthen_analytic_s(1.0, 0.2, 0)


def test_analytic_energy_dispatch():
    assert analytic_energy(RadialSpec(Coulomb(1.0), 1), 0).energy == -0.0625
    approx = HulthenApprox(1.0, 0.0125)
    res = analytic_energy(RadialSpec(approx), 0)
    assert res.energy == pytest.approx(solve_numerov(RadialSpec(approx), 0).energy, abs=1e-6)
    assert analytic_energy(RadialSpec(Yukawa(1.0, 0.1)), 0) is None
    assert analytic_energy(RadialSpec(HulthenConsistent(1.0, 0.0125)), 0) is None
    assert analytic_energy(RadialSpec(Hulthen(1.0, 0.1), 1), 0) is None


def test_compare_spectra_rows():
    rows = compare_spectra(Yukawa(1.0, 0.05), Coulomb(1.0), [(1, 1), (0, 0), (0, 1)])
    assert [(r["n_radial"], r["l"]) for r in rows] == [(0, 0), (0, 1), (1, 1)]
    assert rows[0]["rel_diff"] == pytest.approx(abs(rows[0]["E_A"] - rows[0]["E_B"]) / abs(rows[0]["E_A"]))
    assert rows[2]["E_A"] is None and rows[2]["abs_diff"] is None
    assert rows[2]["E_B"] == pytest.approx(-1 / 36, abs=1e-5)


def test_compare_spectra_fd_method():
    num = compare_spectra(Hulthen(0.2, 0.1), Coulomb(1.0), [(0, 0)])
    fd = compare_spectra(Hulthen(0.2, 0.1), Coulomb(1.0), [(0, 0)], method="fd_matrix")
    assert num[0]["E_A"] == pytest.approx(fd[0]["E_A"], abs=1e-6)
    with pytest.raises(ValidationError):
        compare_spectra(Coulomb(1.0), Coulomb(1.0), [(0, 0)], method="other")


def test_spec_validation():
    with pytest.raises(ValidationError):
        RadialSpec(Coulomb(-1.0))
    with pytest.raises(ValidationError):
        RadialSpec(Coulomb(1.0), -1)
    with pytest.raises(ValidationError):
        RadialSpec(Coulomb(1.0), 1, "greene_aldrich")
    with pytest.raises(ValidationError):
        RadialGrid(10.0, 10)
    with pytest.raises(ValidationError):
        solve_numerov(RadialSpec(Coulomb(1.0)), -1)


def test_consistent_variant_is_shallower():
    a = 0.05
    q20 = solve_numerov(RadialSpec(HulthenApprox(1.0, a / 4)), 0).energy
    cons = solve_numerov(RadialSpec(HulthenConsistent(1.0, a / 4)), 0).energy
    assert q20 < cons < 0


def test_result_serialisation():
    res = solve_numerov(RadialSpec(Coulomb(1.0)), 0)
    d = res.as_dict()
    assert d["method"] == "numerov" and d["n_radial"] == 0 and "n=" in d["grid_meta"]
