"""Command-line interface: invariant verification, single cloning runs and sweeps."""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from .cloner import clone_report, isotropy_scan
from .nosignalling import DEFAULT_BUDGET, DEFAULT_PSD_TOL, DEFAULT_RADIUS_TOL, max_radius
from .verify import RunConfig, run_verification

BOUND_SWEEP_HEADER = "phi,eta1,eta2,max_radius_found,circle_radius,deviation"
FIDELITY_SWEEP_HEADER = "phi,eta1,eta2,fidelity_o,fidelity_b,ppt_min_eig,isotropy_residual"


def format_number(x: float) -> str:
    """Fixed (positional) notation with 10 significant digits, locale independent."""
    x = float(x)
    if not math.isfinite(x):
        return "nan"
    if x == 0.0:
        x = 0.0  # normalize -0.0
    return np.format_float_positional(x, precision=10, unique=False, fractional=False, trim="k")


def _write_csv(path: str | None, header: str, rows: list[list[float]]) -> None:
    lines = [header] + [",".join(format_number(value) for value in row) for row in rows]
    text = "\n".join(lines) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def _angle(value: float, degrees: bool) -> float:
    return math.radians(value) if degrees else value


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        seed=args.seed,
        psd_tol=args.psd_tol,
        radius_tol=args.radius_tol,
        budget=args.budget,
        samples=args.samples,
    )


def _cmd_verify(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    print(f"verification suite  seed={config.seed}  psd_tol={config.psd_tol:g}  "
          f"radius_tol={config.radius_tol:g}  budget={config.budget}  samples={config.samples or 'default'}")
    results = run_verification(config)
    failures = 0
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        failures += 0 if result.passed else 1
        print(f"{status}  {result.name:<32} measured {result.measured: .3e}  "
              f"(needs {result.direction} {result.threshold:g}, {result.seconds:.2f}s)")
    print(f"{len(results) - failures}/{len(results)} checks passed")
    return 0 if failures == 0 else 1


def _cmd_clone(args: argparse.Namespace) -> int:
    theta = _angle(args.theta, args.degrees)
    report = clone_report(theta, (args.eta1, args.eta2))
    circle_gap = report.eta1**2 + report.eta2**2 - 1.0
    rows = [
        ("theta (rad)", format_number(report.theta)),
        ("eta1, eta2", f"{format_number(report.eta1)}, {format_number(report.eta2)}"),
        ("on optimal circle", f"{'yes' if report.on_circle else 'no'} (eta1^2+eta2^2-1 = {circle_gap:.3e})"),
        ("fidelity_o", format_number(report.fidelity_o)),
        ("fidelity_b", format_number(report.fidelity_b)),
        ("shrink_o (z, x)", f"{format_number(report.shrink_o_z)}, {format_number(report.shrink_o_x)}"),
        ("shrink_b (z, x)", f"{format_number(report.shrink_b_z)}, {format_number(report.shrink_b_x)}"),
        ("isotropy_residual_o", f"{report.isotropy_residual_o:.3e}"),
        ("isotropy_residual_b", f"{report.isotropy_residual_b:.3e}"),
        ("ppt_min_eigenvalue", f"{report.ppt_min_eigenvalue:.3e}"),
    ]
    for label, value in rows:
        print(f"{label:<20}: {value}")
    print("correlation tensor  :")
    for row in report.correlation:
        print("    " + "  ".join(f"{value: .10f}" for value in row))
    return 0


def _cmd_bound_sweep(args: argparse.Namespace) -> int:
    rng = np.random.default_rng(args.seed)
    print(f"bound sweep  n_phi={args.n_phi}  seed={args.seed}  budget={args.budget}  "
          f"psd_tol={args.psd_tol:g}  radius_tol={args.radius_tol:g}", file=sys.stderr)
    rows = []
    for k in range(args.n_phi):
        phi = k * (np.pi / 2) / (args.n_phi - 1)
        found = max_radius(phi, radius_tol=args.radius_tol, budget=args.budget,
                           psd_tol=args.psd_tol, rng=rng)
        rows.append([phi, found * np.cos(phi), found * np.sin(phi), found, 1.0, abs(found - 1.0)])
    _write_csv(args.out, BOUND_SWEEP_HEADER, rows)
    return 0


def _cmd_fidelity_sweep(args: argparse.Namespace) -> int:
    rows = []
    probe_theta = 0.9  # any non-cardinal angle; on-circle results are angle independent
    for k in range(args.n_points):
        phi = k * (np.pi / 2) / (args.n_points - 1)
        etas = (float(np.cos(phi)), float(np.sin(phi)))
        report = clone_report(probe_theta, etas)
        residual = isotropy_scan(etas, args.samples)
        rows.append([phi, etas[0], etas[1], report.fidelity_o, report.fidelity_b,
                     report.ppt_min_eigenvalue, residual])
    _write_csv(args.out, FIDELITY_SWEEP_HEADER, rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="circleclone",
        description="Asymmetric 1-to-2 cloning of great-circle qubits: "
                    "optimal machine simulation and no-signalling feasibility bound.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run the full invariant suite")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--psd-tol", type=float, default=DEFAULT_PSD_TOL, dest="psd_tol")
    verify.add_argument("--radius-tol", type=float, default=DEFAULT_RADIUS_TOL, dest="radius_tol")
    verify.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    verify.add_argument("--samples", type=int, default=0,
                        help="override every check's sample count (0 = per-check defaults)")
    verify.set_defaults(func=_cmd_verify)

    clone_cmd = sub.add_parser("clone", help="one cloning run with full diagnostics")
    clone_cmd.add_argument("--theta", type=float, required=True, help="input angle on the x-z circle")
    clone_cmd.add_argument("--eta1", type=float, required=True)
    clone_cmd.add_argument("--eta2", type=float, required=True)
    clone_cmd.add_argument("--degrees", action="store_true", help="interpret --theta in degrees")
    clone_cmd.set_defaults(func=_cmd_clone)

    bound = sub.add_parser("bound-sweep", help="recover the attainable boundary radius over directions")
    bound.add_argument("--n-phi", type=int, required=True, dest="n_phi")
    bound.add_argument("--out", type=str, default=None, help="CSV path (default: stdout)")
    bound.add_argument("--seed", type=int, default=0)
    bound.add_argument("--psd-tol", type=float, default=DEFAULT_PSD_TOL, dest="psd_tol")
    bound.add_argument("--radius-tol", type=float, default=DEFAULT_RADIUS_TOL, dest="radius_tol")
    bound.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    bound.set_defaults(func=_cmd_bound_sweep)

    fidelity = sub.add_parser("fidelity-sweep", help="fidelities and separability along the optimal circle")
    fidelity.add_argument("--n-points", type=int, required=True, dest="n_points")
    fidelity.add_argument("--out", type=str, default=None, help="CSV path (default: stdout)")
    fidelity.add_argument("--samples", type=int, default=64,
                          help="angles sampled by the per-point isotropy scan")
    fidelity.set_defaults(func=_cmd_fidelity_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "clone":
        if not (0.0 <= args.eta1 <= 1.0 and 0.0 <= args.eta2 <= 1.0):
            parser.error("--eta1 and --eta2 must lie in [0, 1]")
    if args.command == "bound-sweep" and args.n_phi < 2:
        parser.error("--n-phi must be at least 2")
    if args.command == "fidelity-sweep":
        if args.n_points < 2:
            parser.error("--n-points must be at least 2")
        if args.samples < 2:
            parser.error("--samples must be at least 2")
    if args.command == "verify":
        if args.psd_tol <= 0 or args.radius_tol <= 0 or args.budget <= 0:
            parser.error("tolerances and budget must be positive")
        if args.samples < 0 or args.samples == 1:
            parser.error("--samples must be 0 (per-check defaults) or at least 2")

    try:
        return args.func(args)
    except OSError as error:
        print(f"error: {error}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
