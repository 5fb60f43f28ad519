"""Command-line entry point: ``qpainleve <subcommand> [flags]``.

Every run writes its data files plus ``manifest.json`` into ``--out``.  Complex
values are given as ``re,im`` (use ``--flag=-1,0`` for a leading minus sign)
and serialised to JSON as ``{"re": ..., "im": ...}``.

Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from datetime import datetime, timezone
from importlib import metadata
from pathlib import Path

import numpy as np

from . import radial, riccati, schrodinger1d as sch, yukawa
from .errors import NearPole, QPainleveError, UnknownSchema, ValidationError
from .lax import JetPoint, SpectralParams, zero_curvature_residual
from .pauli import fro_norm
from .painleve2 import PIIState, RaySpec, empirical_order, integrate


# -- encoding helpers ----------------------------------------------------------


def parse_complex(text: str) -> complex:
    parts = str(text).split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")


def encode(obj):
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, np.generic):
        return encode(obj.item())
    if isinstance(obj, dict):
        return {k: encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    return obj


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return repr(float(x))


def atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(v) if not isinstance(v, str) else v for v in row])
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(encode(obj), indent=2, sort_keys=True) + "\n"


def version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


# -- gnuplot -------------------------------------------------------------------

SCHEMAS = {
    "error-profile": yukawa.ERROR_PROFILE_COLUMNS,
    "lax-residual": (
        "z_re", "z_im", "lambda_re", "lambda_im",
        "r1_re", "r1_im", "r2_re", "r2_im", "r3_re", "r3_im", "fro_norm",
    ),
    "trajectory": ("z_re", "z_im", "f_re", "f_im", "fp_re", "fp_im"),
    "snapshot": ("x", "psi_re", "psi_im", "ansatz_re", "ansatz_im", "abs_err"),
    "compare": radial.COMPARE_COLUMNS,
}

_PLOTS = {
    "error-profile": (
        "set xlabel 'r'\nset ylabel 'V'\n",
        "plot '{csv}' using 1:2 with lines title 'exact', \\\n"
        "     '{csv}' using 1:3 with lines title 'approx'\n",
    ),
    "lax-residual": (
        "set xlabel 'Re z'\nset ylabel 'fro_norm(R)'\n",
        "plot '{csv}' using 1:11 with points title 'fro_norm'\n",
    ),
    "trajectory": (
        "set xlabel 'Im z'\nset ylabel 'f'\n",
        "plot '{csv}' using 2:3 with lines title 'Re f', \\\n"
        "     '{csv}' using 2:4 with lines title 'Im f'\n",
    ),
    "snapshot": (
        "set xlabel 'x'\nset ylabel 'psi'\n",
        "plot '{csv}' using 1:2 with lines title 'Re psi', \\\n"
        "     '{csv}' using 1:4 with lines dt 2 title 'Re ansatz'\n",
    ),
    "compare": (
        "set xlabel 'level'\nset ylabel 'E'\n",
        "plot '{csv}' using 0:3 with linespoints title 'E_A', \\\n"
        "     '{csv}' using 0:4 with linespoints title 'E_B'\n",
    ),
}


def emit_gnuplot(csv_path, plot_kind: str | None = None) -> Path:
    """Write ``<csv>.gp`` next to the CSV; the schema is checked against the header."""
    csv_path = Path(csv_path)
    if not csv_path.is_file():
        raise ValidationError(f"no such CSV file: {csv_path}")
    with open(csv_path, newline="") as fh:
        header = tuple(next(csv.reader(fh), ()))
    matches = [k for k, cols in SCHEMAS.items() if tuple(cols) == header]
    if not matches or (plot_kind is not None and plot_kind not in matches):
        raise UnknownSchema(f"{csv_path} header {header!r} does not match {plot_kind or 'any schema'}")
    kind = plot_kind or matches[0]
    setup, body = _PLOTS[kind]
    script = (
        "set datafile separator ','\n"
        "set key autotitle columnhead\n"
        f"set terminal pngcairo size 900,600\nset output '{csv_path.stem}.png'\n"
        + setup
        + body.format(csv=csv_path.name)
    )
    out = csv_path.with_suffix(".gp")
    atomic_write(out, script)
    return out


# -- subcommands ---------------------------------------------------------------


def _line(a: complex, b: complex, n: int) -> np.ndarray:
    return a + (b - a) * np.linspace(0.0, 1.0, n) if n > 1 else np.array([a])


def cmd_lax_residual(args, out: Path) -> dict:
    rows, skipped = [], 0
    for lam in _line(args.lambda_min, args.lambda_max, args.nlambda):
        sp = SpectralParams(lam=lam, c=args.c, hbar=args.hbar)
        for z in _line(args.z_min, args.z_max, args.nz):
            if args.source == "closed-form":
                try:
                    f, fp, fpp = riccati.closed_form_jet(z, lam, riccati.beta_for(lam))
                except NearPole:
                    skipped += 1
                    continue
                jet = JetPoint(z, complex(f), complex(fp), complex(fpp))
            else:
                jet = JetPoint(z, args.f, args.fp, args.fpp)
            r = zero_curvature_residual(jet, sp)
            rows.append((z.real, z.imag, lam.real, lam.imag,
                         r.c1.real, r.c1.imag, r.c2.real, r.c2.imag,
                         r.c3.real, r.c3.imag, fro_norm(r)))
    path = out / "lax_residual.csv"
    atomic_write(path, csv_text(SCHEMAS["lax-residual"], rows))
    files = [path]
    if args.gnuplot:
        files.append(emit_gnuplot(path, "lax-residual"))
    return {"files": files, "summary": {"rows": len(rows), "skipped_near_pole": skipped}}


def cmd_pii_integrate(args, out: Path) -> dict:
    if (args.steps is None) == (args.tol is None):
        raise ValidationError("give exactly one of --steps and --tol")
    d = args.dir / abs(args.dir) if args.dir != 0 else args.dir
    ray = RaySpec(args.z0, d, args.len, steps=args.steps, tol=args.tol, samples=args.samples)
    sp = SpectralParams(lam=1.0, c=args.c, hbar=args.hbar)
    traj = integrate(PIIState(args.z0, args.f0, args.fp0), ray, sp)
    rows = zip(traj.z.real, traj.z.imag, traj.f.real, traj.f.imag, traj.fp.real, traj.fp.imag)
    path = out / "trajectory.csv"
    atomic_write(path, csv_text(SCHEMAS["trajectory"], rows))
    return {"files": [path], "summary": {"samples": len(traj)}}


def riccati_report(lam: complex, samples: int, seed: int, guard: float, window: float) -> dict:
    rng = np.random.default_rng(seed)
    g = riccati.PoleGuard(guard)
    beta = riccati.beta_for(lam)
    worst, taken = 0.0, 0
    while taken < samples:
        z = complex(rng.uniform(-window, window), rng.uniform(-window, window))
        try:
            rel = float(riccati.riccati_relative_residual(z, lam, beta, g))
        except NearPole:
            continue
        worst = max(worst, rel)
        taken += 1
    poles = riccati.pole_lattice(lam, (-window, window, -window, window))
    return {
        "max_residual": worst,
        "samples": taken,
        "beta": beta,
        "pole_count_in_window": len(poles),
    }


def cmd_riccati_verify(args, out: Path) -> dict:
    report = riccati_report(args.lam, args.samples, args.seed, args.guard, args.window)
    path = out / "riccati_verify.json"
    atomic_write(path, json_text(report))
    return {"files": [path], "summary": report}


def qpii_on_grid(grid: sch.GridSpec, p: sch.PhysicalParams, f0, fp0, hbar_q):
    """QPII trajectory (c=0) on the ray z = i kappa x, one RK4 step per grid cell."""
    z0 = complex(sch.x_to_z(grid.x_min, p))
    ray = RaySpec(z0, 1j, (grid.x_max - grid.x_min) * p.kappa, steps=grid.n - 1)
    return integrate(PIIState(z0, f0, fp0), ray, SpectralParams(lam=p.lam, c=0, hbar=hbar_q))


def cmd_schrodinger_evolve(args, out: Path) -> dict:
    alpha = None if args.alpha_sign is None else 2j * args.alpha_sign
    p = sch.PhysicalParams(lam=args.lam, alpha=alpha, convention=args.convention)
    sign = sch.reduction_sign(p.convention)
    check = args.source == "closed-form"
    grid = sch.make_grid(args.xmin, args.xmax, args.nx, p, check_poles=check)
    if args.source == "closed-form":
        src = sch.closed_form_source(p.lam)
        traj = None
    else:
        traj = qpii_on_grid(grid, p, args.f0, args.fp0, p.hbar)
        src = sch.trajectory_source(traj)
    V = sch.potential_on_grid(grid, p, src)
    summary = {"alpha": p.alpha, "convention": p.convention, "reduction_sign": sign}

    if traj is not None:
        maxima = []
        for factor in (1, 2, 4):
            g = sch.GridSpec(args.xmin, args.xmax, (args.nx - 1) * factor + 1)
            t = qpii_on_grid(g, p, args.f0, args.fp0, p.hbar)
            maxima.append(float(np.max(np.abs(sch.reduction_residual(t, p.alpha, p.hbar, sign)))))
        summary["reduction_residual_max"] = maxima[0]
        summary["convergence_slope"] = empirical_order(maxima)
    else:
        summary["convergence_slope"] = None

    if args.mode == "ansatz-check":
        fields = [sch.ansatz_field(grid, t, p, src) for t in (0.0, args.dt, 2 * args.dt)]
        res = sch.pde_residual_fd(fields, V, p)
        summary["max_residual"] = float(np.max(np.abs(res.values)))
        final = fields[1]
        summary["l2_dev"] = 0.0
    else:
        psi0 = sch.ansatz_field(grid, 0.0, p, src)
        ends = lambda t: (  # noqa: E731
            complex(sch.ansatz_psi(grid.x_min, t, p, src)),
            complex(sch.ansatz_psi(grid.x_max, t, p, src)),
        )
        final = sch.propagate_cn(psi0, V, args.dt, args.steps, p, boundary=ends)
        ref = sch.ansatz_psi(grid.x, final.t, p, src)
        summary["l2_dev"] = float(np.linalg.norm(final.values - ref) / np.linalg.norm(ref))
        summary["max_residual"] = None
    summary["t"] = final.t
    ref = sch.ansatz_psi(grid.x, final.t, p, src)
    rows = zip(grid.x, final.values.real, final.values.imag, ref.real, ref.imag,
               np.abs(final.values - ref))
    snap = out / "snapshot.csv"
    summ = out / "summary.json"
    atomic_write(snap, csv_text(SCHEMAS["snapshot"], rows))
    atomic_write(summ, json_text(summary))
    return {"files": [snap, summ], "summary": summary}


def _V0(args) -> float:
    if args.Z is not None:
        return args.Z * yukawa.FINE_STRUCTURE
    if args.V0 is None:
        raise ValidationError("give --V0 or --Z")
    return args.V0


def _a_and_lambda(args) -> tuple[float, float]:
    if args.a is not None and args.lam is not None:
        return args.a, args.lam
    if args.a is not None:
        return args.a, args.a / 4
    if args.lam is not None:
        return 4 * args.lam, args.lam
    raise ValidationError("give --a or --lambda")


def cmd_yukawa_error(args, out: Path) -> dict:
    V0 = _V0(args)
    a, lam = _a_and_lambda(args)
    if args.n < 1:
        raise ValidationError("--n must be positive")
    if args.log_grid:
        r = np.geomspace(args.rmin, args.rmax, args.n)
    else:
        r = np.linspace(args.rmin, args.rmax, args.n)
    rows = yukawa.error_profile(r, yukawa.YukawaParams(V0, a), lam, args.beta)
    path = out / "error_profile.csv"
    atomic_write(path, csv_text(yukawa.ERROR_PROFILE_COLUMNS, rows.tolist()))
    files = [path]
    if args.gnuplot:
        files.append(emit_gnuplot(path, "error-profile"))
    report = yukawa.parameter_map(lam).as_dict()
    return {"files": files, "summary": {"rows": len(rows), "parameter_map": report}}


def build_potential(kind: str, args):
    V0 = _V0(args)
    if kind == "coulomb":
        return radial.Coulomb(V0)
    a, lam = _a_and_lambda(args)
    if kind == "yukawa":
        return radial.Yukawa(V0, a)
    if kind == "hulthen-approx":
        if args.V0_eff is not None:
            return radial.Hulthen(args.V0_eff, 8 * lam)
        return radial.HulthenApprox(V0, lam, args.beta)
    if kind == "hulthen-consistent":
        return radial.HulthenConsistent(V0, lam, args.beta)
    raise ValidationError(f"unknown potential {kind!r}")


def cmd_bound_states(args, out: Path) -> dict:
    centrifugal = args.centrifugal.replace("-", "_")
    pot = build_potential(args.potential, args)
    spec = radial.RadialSpec(pot, args.l, centrifugal)
    grid = radial.RadialGrid(args.rmax, args.n) if args.rmax and args.n else None
    if args.compare:
        other = build_potential(args.compare, args)
        levels = [(k, args.l) for k in range(args.levels)]
        rows = radial.compare_spectra(
            radial.RadialSpec(pot, args.l, centrifugal),
            radial.RadialSpec(other, args.l, centrifugal),
            levels, grid, args.method,
        )
        path = out / "compare.csv"
        atomic_write(path, csv_text(radial.COMPARE_COLUMNS, ([r[c] for c in radial.COMPARE_COLUMNS] for r in rows)))
        return {"files": [path], "summary": {"rows": len(rows)}}
    if args.method == "numerov":
        results = []
        for k in range(args.levels):
            results.append(radial.solve_numerov(spec, k, grid))
    else:
        results = radial.solve_fd_matrix(spec, args.levels, grid)
        if len(results) < args.levels:
            raise radial.NoBoundState(f"only {len(results)} bound levels found")
    path = out / "bound_states.json"
    payload = [r.as_dict() for r in results]
    atomic_write(path, json_text(payload))
    return {"files": [path], "summary": {"energies": [r.energy for r in results]}}


def cmd_gnuplot(args, out: Path) -> dict:
    return {"files": [emit_gnuplot(args.csv, args.kind)], "summary": {}}


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qpainleve", description=__doc__.split("\n")[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="out", help="output directory (default: out)")
    common.add_argument("--config", help="key=value file; explicit flags win")
    common.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)
    cx = parse_complex

    p = sub.add_parser("lax-residual", parents=[common],
                       help="zero-curvature residual of the Lax pair over (z, lambda) lines")
    p.add_argument("--z-min", type=cx, default=complex(0.1, 0.05))
    p.add_argument("--z-max", type=cx, default=complex(1.0, 0.5))
    p.add_argument("--nz", type=int, default=10)
    p.add_argument("--lambda-min", type=cx, default=complex(0.5, 0))
    p.add_argument("--lambda-max", type=cx, default=complex(1.5, 0))
    p.add_argument("--nlambda", type=int, default=3)
    p.add_argument("--c", type=cx, default=0j)
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--source", choices=("closed-form", "fixed"), default="closed-form")
    p.add_argument("--f", type=cx, default=0j)
    p.add_argument("--fp", type=cx, default=0j)
    p.add_argument("--fpp", type=cx, default=0j)
    p.add_argument("--gnuplot", action="store_true")
    p.set_defaults(handler=cmd_lax_residual)

    p = sub.add_parser("pii-integrate", parents=[common],
                       help="integrate quantum Painleve II along a complex ray")
    p.add_argument("--z0", type=cx, default=0j)
    p.add_argument("--dir", type=cx, default=complex(1, 0))
    p.add_argument("--len", type=float, default=1.0)
    p.add_argument("--steps", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--samples", type=int)
    p.add_argument("--c", type=cx, default=0j)
    p.add_argument("--hbar", type=float, default=0.0)
    p.add_argument("--f0", type=cx, default=0j)
    p.add_argument("--fp0", type=cx, default=0j)
    p.set_defaults(handler=cmd_pii_integrate)

    p = sub.add_parser("riccati-verify", parents=[common],
                       help="check the closed-form Riccati solution at random points")
    p.add_argument("--lambda", dest="lam", type=cx, default=complex(0.3, 0))
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--guard", type=float, default=1e-6)
    p.add_argument("--window", type=float, default=1.0)
    p.set_defaults(handler=cmd_riccati_verify)

    p = sub.add_parser("schrodinger-evolve", parents=[common],
                       help="reduction of the time-dependent Schrodinger equation to QPII")
    p.add_argument("--lambda", dest="lam", type=cx, default=complex(1, 0))
    p.add_argument("--alpha-sign", type=int, choices=(-1, 1),
                   help="alpha = sign * 2i (default: the matched value)")
    p.add_argument("--convention", choices=tuple(sch.CONVENTIONS), default=sch.DEFAULT_CONVENTION)
    p.add_argument("--source", choices=("trajectory", "closed-form"), default="trajectory")
    p.add_argument("--f0", type=cx, default=complex(0.3, 0.1))
    p.add_argument("--fp0", type=cx, default=0j)
    p.add_argument("--xmin", type=float, default=-1.0)
    p.add_argument("--xmax", type=float, default=1.0)
    p.add_argument("--nx", type=int, default=2001)
    p.add_argument("--dt", type=float, default=1e-4)
    p.add_argument("--steps", type=int, default=500)
    p.add_argument("--mode", choices=("ansatz-check", "propagate"), default="propagate")
    p.set_defaults(handler=cmd_schrodinger_evolve)

    def strength_flags(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--V0", type=float)
        g.add_argument("--Z", type=int)
        p.add_argument("--a", type=float)
        p.add_argument("--lambda", dest="lam", type=float)
        p.add_argument("--beta", choices=yukawa.BETA_CONVENTIONS, default="map",
                       help="|beta| reading: map (8 lambda) or sqrt (4 sqrt(lambda^2+1))")

    p = sub.add_parser("yukawa-error", parents=[common],
                       help="exact vs approximated Yukawa potential on an r grid")
    strength_flags(p)
    p.add_argument("--rmin", type=float, default=1e-3)
    p.add_argument("--rmax", type=float, default=10.0)
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--log-grid", action="store_true")
    p.add_argument("--gnuplot", action="store_true")
    p.set_defaults(handler=cmd_yukawa_error)

    families = ("yukawa", "hulthen-approx", "hulthen-consistent", "coulomb")
    p = sub.add_parser("bound-states", parents=[common],
                       help="radial bound states (units hbar = 2m = 1)")
    p.add_argument("--potential", choices=families, required=True)
    strength_flags(p)
    p.add_argument("--V0-eff", dest="V0_eff", type=float,
                   help="explicit Hulthen strength for hulthen-approx")
    p.add_argument("--l", type=int, default=0)
    p.add_argument("--levels", type=int, default=1)
    p.add_argument("--centrifugal", choices=("exact", "greene-aldrich"), default="exact")
    p.add_argument("--method", choices=("numerov", "fd_matrix"), default="numerov")
    p.add_argument("--rmax", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--compare", choices=families, help="second potential; writes compare.csv")
    p.set_defaults(handler=cmd_bound_states)

    p = sub.add_parser("gnuplot", parents=[common], help="emit a gnuplot script for a CSV")
    p.add_argument("--csv", required=True)
    p.add_argument("--kind", choices=tuple(SCHEMAS))
    p.set_defaults(handler=cmd_gnuplot)
    return parser


def read_config(path: str) -> dict[str, str]:
    """``key = value`` lines; ``#`` comments, optional quotes, dashes allowed in keys."""
    cfg = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("["):
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        cfg[key.replace("-", "_")] = value.strip("\"'")
    return cfg


def _apply_config(parser, argv, args):
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    subparser = sub.choices[args.command]
    try:
        cfg = read_config(args.config)
    except OSError as exc:
        raise ValidationError(f"cannot read config: {exc}") from exc
    # keys may be spelled like the flag (``lambda``, ``z-min``) or like its dest
    actions = {}
    for a in subparser._actions:
        if a.dest in ("help", "config"):
            continue
        actions[a.dest] = a
        for opt in a.option_strings:
            actions[opt.lstrip("-").replace("-", "_")] = a
    unknown = sorted(set(cfg) - set(actions))
    if unknown:
        raise ValidationError(f"unknown config keys: {', '.join(unknown)}")
    defaults = {}
    for name, value in cfg.items():
        action = actions[name]
        key = action.dest
        if isinstance(action, argparse._StoreTrueAction):
            defaults[key] = value.lower() in ("1", "true", "yes")
        elif action.type is not None:
            try:
                defaults[key] = action.type(value)
            except (argparse.ArgumentTypeError, ValueError) as exc:
                raise ValidationError(f"config {key}: {exc}") from exc
        else:
            defaults[key] = value
    subparser.set_defaults(**defaults)
    return parser.parse_args(argv)


def run(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    started = datetime.now(timezone.utc).isoformat()
    try:
        if args.config:
            args = _apply_config(parser, argv, args)
        out = Path(args.out)
        result = args.handler(args, out)
    except SystemExit as exc:
        return int(exc.code or 0)
    except QPainleveError as exc:
        print(f"qpainleve: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, OSError) as exc:
        print(f"qpainleve: invalid input: {exc}", file=sys.stderr)
        return ValidationError.exit_code
    config = {k: v for k, v in sorted(vars(args).items()) if k != "handler"}
    manifest = {
        "config": config,
        "version": version(),
        "started_at": started,
        "seed": args.seed,
        "files": [Path(f).name for f in result["files"]],
    }
    atomic_write(out / "manifest.json", json_text(manifest))
    summary = result.get("summary")
    if summary:
        print(json.dumps(encode(summary), sort_keys=True, default=str))
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
