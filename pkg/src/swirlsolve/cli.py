"""Command-line front end: solve, scan, sweep, classify, export.

Structured results go to files (JSON/CSV/VTK, written atomically); stdout
carries machine-parseable one-line summaries; diagnostics go to stderr at
the level selected by the SWIRLSOLVE_LOG environment variable.  Every run
writes a manifest next to its primary output.

Exit codes: 0 success, 1 domain/solver error, 2 usage error, 3 a scan
found an admissible or inconclusive discontinuity (a finding that would
contradict the nonexistence results and demands inspection).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .errors import SolverFailure, SwirlSolveError
from .euler import certify_nonexistence, default_grid, euler_conical, euler_continuous
from .fields import export_csv, export_vtk, reconstruct
from .similarity import FlowParameters, atomic_write_text, load_profile, save_profile
from .viscous import (
    SolverConfig,
    classify_regime,
    parameter_sweep,
    picard_solve,
    sweep_to_csv,
)

log = logging.getLogger("swirlsolve.cli")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_FINDING = 3


def _configure_logging():
    level = os.environ.get("SWIRLSOLVE_LOG", "warn").lower()
    levels = {
        "error": logging.ERROR,
        "warn": logging.WARNING,
        "info": logging.INFO,
        "debug": logging.DEBUG,
    }
    logging.basicConfig(
        stream=sys.stderr,
        level=levels.get(level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
    )


def _write_manifest(subcommand, args_dict, config_dict, outputs, started):
    manifest = {
        "subcommand": subcommand,
        "parameters": args_dict,
        "config": config_dict,
        "artifact_version": __version__,
        "outputs": [os.fspath(p) for p in outputs],
        "timestamp_utc": datetime.now(timezone.utc).isoformat(),
        "duration_seconds": round(time.monotonic() - started, 6),
    }
    path = f"{outputs[0]}.manifest.json"
    atomic_write_text(path, json.dumps(manifest, indent=2) + "\n")
    return path


def _flag_dict(args, names):
    return {name: getattr(args, name) for name in names}


# ---------------------------------------------------------------------------
# subcommands


def _cmd_euler(args):
    started = time.monotonic()
    params = FlowParameters(
        nu=0.0,
        v_swirl=args.v0,
        e0=args.e0,
        xi0=args.xi0,
        branch=+1 if args.branch == "pos" else -1,
    )
    grid = default_grid(xi0=args.xi0, offset=args.xi_min, xi_max=args.xi_max, n=args.n)
    if args.xi0 == 0.0:
        profile = euler_continuous(params, grid)
    else:
        profile = euler_conical(params, grid)
    save_profile(profile, args.out)
    _write_manifest(
        "euler",
        _flag_dict(args, ("v0", "e0", "branch", "xi0", "xi_min", "xi_max", "n")),
        {},
        [args.out],
        started,
    )
    print(f"profile={args.out} n={len(profile)} xi0={args.xi0:g}")
    return EXIT_OK


def _cmd_viscous(args):
    started = time.monotonic()
    params = FlowParameters(nu=args.nu, v_swirl=args.vinf, e0=args.e0)
    config = SolverConfig(
        x_max=args.x_max,
        n_grid=args.n,
        picard_tol=args.tol,
        max_iters=args.max_iters,
        damping=args.damping,
        ode_tol=args.ode_tol,
    )
    profile = picard_solve(params, config)
    if args.v0_bc != 0.0:
        # re-anchor the swirl at the plane and refresh the stored profile
        from .viscous import solve_V_given_theta

        v = solve_V_given_theta(
            profile.grid, profile.theta, args.nu, args.vinf, v0=args.v0_bc
        )
        from dataclasses import replace

        profile = replace(profile, v=v)
    save_profile(profile, args.out)
    _write_manifest(
        "viscous",
        _flag_dict(args, ("nu", "vinf", "e0", "v0_bc")),
        _flag_dict(args, ("x_max", "n", "tol", "max_iters", "damping", "ode_tol")),
        [args.out],
        started,
    )
    conv = profile.convergence
    print(
        f"profile={args.out} iterations={conv['iterations']} "
        f"residual_2_5a={conv['residual_2_5a']:.3e} "
        f"residual_2_5b={conv['residual_2_5b']:.3e}"
    )
    return EXIT_OK


def _cmd_jump_scan(args):
    started = time.monotonic()
    xi0 = args.xi0 if args.domain == "cone" else 0.0
    if args.sigma_min <= xi0:
        raise SwirlSolveError(f"--sigma-min must exceed xi0={xi0:g}")
    sigma = np.linspace(args.sigma_min, args.sigma_max, args.n)
    sigma = sigma[np.abs(sigma**2 - xi0**2) > 1e-12]  # drop singular colliders
    report = certify_nonexistence(
        "half-space" if args.domain == "half" else "conical",
        sigma,
        xi0=xi0,
        n_samples=args.samples,
    )
    atomic_write_text(args.out, json.dumps(report.to_dict(), indent=2) + "\n")
    _write_manifest(
        "jump-scan",
        _flag_dict(args, ("domain", "xi0", "sigma_min", "sigma_max", "n", "samples")),
        {},
        [args.out],
        started,
    )
    print(
        f"{report.n_admissible} admissible discontinuities / {report.n_tested} tested "
        f"({report.n_inconclusive} inconclusive)"
    )
    if report.n_admissible or report.n_inconclusive:
        log.error("scan produced admissible or inconclusive locations; inspect %s", args.out)
        return EXIT_FINDING
    return EXIT_OK


def _cmd_field(args):
    started = time.monotonic()
    profile = load_profile(args.infile)
    r = np.linspace(args.r0, args.r1, args.nr)
    z = np.linspace(args.z0, args.z1, args.nz)
    field = reconstruct(profile, r, z)
    if args.format == "csv":
        export_csv(field, args.out)
    else:
        export_vtk(field, args.out)
    _write_manifest(
        "field",
        _flag_dict(args, ("infile", "r0", "r1", "z0", "z1", "nr", "nz", "format")),
        {},
        [args.out],
        started,
    )
    print(f"field={args.out} nr={args.nr} nz={args.nz} format={args.format}")
    return EXIT_OK


def _cmd_classify(args):
    profile = load_profile(args.infile)
    print(classify_regime(profile).value)
    return EXIT_OK


def _parse_list(text):
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise SwirlSolveError(f"could not parse list {text!r}") from exc


def _cmd_sweep(args):
    started = time.monotonic()
    records = parameter_sweep(
        _parse_list(args.nu_list),
        _parse_list(args.vinf_list),
        _parse_list(args.e0_list),
        config=SolverConfig(),
        jobs=args.jobs,
    )
    atomic_write_text(args.out, sweep_to_csv(records))
    _write_manifest(
        "sweep",
        _flag_dict(args, ("nu_list", "vinf_list", "e0_list", "jobs")),
        {},
        [args.out],
        started,
    )
    n_conv = sum(1 for r in records if r.converged)
    print(f"sweep={args.out} points={len(records)} converged={n_conv}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="swirlsolve",
        description="Self-similar axisymmetric swirling-flow solver and verifier.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("euler", help="evaluate the closed-form inviscid family")
    p.add_argument("--v0", type=float, required=True, help="boundary swirl value")
    p.add_argument("--e0", type=float, required=True, help="boundary pressure value")
    p.add_argument("--branch", choices=("pos", "neg"), required=True)
    p.add_argument("--xi0", type=float, default=0.0, help="cone boundary slope (0 = half space)")
    p.add_argument("--xi-min", dest="xi_min", type=float, default=1e-4)
    p.add_argument("--xi-max", dest="xi_max", type=float, default=1e3)
    p.add_argument("--n", type=int, default=1500)
    p.add_argument("--out", default="euler_profile.json")
    p.set_defaults(func=_cmd_euler)

    p = sub.add_parser("viscous", help="run the coupled viscous solve")
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--vinf", type=float, required=True)
    p.add_argument("--e0", type=float, required=True)
    p.add_argument("--x-max", dest="x_max", type=float, default=0.999)
    p.add_argument("--n", type=int, default=2048)
    p.add_argument("--tol", type=float, default=1e-10, help="fixed-point tolerance on theta")
    p.add_argument("--max-iters", dest="max_iters", type=int, default=200)
    p.add_argument("--damping", type=float, default=0.5)
    p.add_argument("--ode-tol", dest="ode_tol", type=float, default=1e-10)
    p.add_argument(
        "--v0-bc",
        dest="v0_bc",
        type=float,
        default=0.0,
        help="override the no-slip swirl anchor V(0)",
    )
    p.add_argument("--out", default="viscous_profile.json")
    p.set_defaults(func=_cmd_viscous)

    p = sub.add_parser("jump-scan", help="certify nonexistence of slip discontinuities")
    p.add_argument("--domain", choices=("half", "cone"), required=True)
    p.add_argument("--xi0", type=float, default=0.0)
    p.add_argument("--sigma-min", dest="sigma_min", type=float, required=True)
    p.add_argument("--sigma-max", dest="sigma_max", type=float, required=True)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--samples", type=int, default=512, help="sign samples per sigma")
    p.add_argument("--out", default="jump_scan.json")
    p.set_defaults(func=_cmd_jump_scan)

    p = sub.add_parser("field", help="reconstruct a physical (r, z) field")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--r0", type=float, default=0.1)
    p.add_argument("--r1", type=float, default=2.0)
    p.add_argument("--z0", type=float, default=0.0)
    p.add_argument("--z1", type=float, default=2.0)
    p.add_argument("--nr", type=int, default=26)
    p.add_argument("--nz", type=int, default=26)
    p.add_argument("--format", choices=("csv", "vtk"), default="csv")
    p.add_argument("--out", default="field.csv")
    p.set_defaults(func=_cmd_field)

    p = sub.add_parser("classify", help="print the circulation regime of a profile")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("sweep", help="parameter sweep with per-point diagnostics")
    p.add_argument("--nu-list", dest="nu_list", required=True, help="comma-separated")
    p.add_argument("--vinf-list", dest="vinf_list", required=True)
    p.add_argument("--e0-list", dest="e0_list", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default="sweep.csv")
    p.set_defaults(func=_cmd_sweep)

    return parser


def main(argv=None):
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SolverFailure as exc:
        log.error("solver failure: %s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except SwirlSolveError as exc:
        log.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: i/o failure: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
