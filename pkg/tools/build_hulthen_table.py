"""Regenerate src/qpainleve/data/hulthen_validation.json.

Each row compares the s-wave Hulthen closed form with the finite-difference
matrix spectrum on an automatically sized grid.
"""

import json
from pathlib import Path

from qpainleve.radial import Hulthen, RadialSpec, _hulthen_formula, solve_fd_matrix

TUPLES = [
    (2.0, 0.2, 1),
    (2.0, 0.2, 2),
    (1.0, 0.1, 1),
    (1.0, 0.1, 2),
    (1.0, 0.1, 3),
    (0.5, 0.25, 1),
    (1.5, 0.3, 1),
    (3.0, 0.5, 2),
]

OUT = Path(__file__).resolve().parents[1] / "src/qpainleve/data/hulthen_validation.json"


def main():
    rows = []
    for W, delta, n in TUPLES:
        spec = RadialSpec(Hulthen(W, delta))
        levels = solve_fd_matrix(spec, n)
        fd = levels[n - 1]
        formula = _hulthen_formula(W, delta, n)
        rows.append(
            {
                "W": W,
                "delta": delta,
                "n": n,
                "formula_energy": formula,
                "fd_energy": fd.energy,
                "abs_diff": abs(formula - fd.energy),
                "grid": fd.grid_meta,
            }
        )
        print(rows[-1])
    OUT.write_text(json.dumps({"tolerance": 1e-5, "rows": rows}, indent=2) + "\n")


if __name__ == "__main__":
    main()
