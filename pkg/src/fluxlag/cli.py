"""Command-line front end: runs, figure presets, rate studies, nu sweeps.

Exit codes: 0 success, 1 config/schema error, 2 solver hard error (the
manifest is still written in that case).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .densities import DensityError
from .dynamics import SchemeParams, SolverError, run
from .experiments import (
    FIGURE_IDS,
    ConfigError,
    Scenario,
    default_output_root,
    load_config,
    preset,
    run_scenario,
)
from .mesh import MeshError
from .metrics import l1_error_paper, l1_error_quadrature, rate_fit
from .reference import make_reference
from .transform import reconstruct


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fluxlag",
        description="Lagrangian solver for flux-limited porous-medium diffusion in 1D",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario from a JSON config")
    p_run.add_argument("--config", required=True, help="path to the scenario JSON")
    p_run.add_argument("--out", default=None, help="output directory (overrides the config)")

    p_fig = sub.add_parser("figure", help="run a preset reproducing one reported figure")
    p_fig.add_argument("figure_id", choices=FIGURE_IDS)
    p_fig.add_argument("--n", type=int, default=None, help="node count override (default: preset value)")
    p_fig.add_argument("--out", default=None,
                       help=f"output root (default: $FLUXLAG_OUT or {default_output_root()!r})")

    p_rates = sub.add_parser("rates", help="long-time convergence rate toward the attractor")
    p_rates.add_argument("--m", type=float, required=True, help="nonlinearity exponent (>= 1)")
    p_rates.add_argument("--n", type=int, required=True, help="node count (even)")
    p_rates.add_argument("--t-end", type=float, required=True, help="final time")
    p_rates.add_argument("--window", default=None,
                         help="fit window as 'a,b' (default: [t_end/10, t_end])")
    p_rates.add_argument("--out", default=None, help="output directory for the run artifacts")

    p_sweep = sub.add_parser("sweep-nu", help="viscosity sweep against the homogeneous limit")
    p_sweep.add_argument("--values", default="1,10,100", help="comma-separated nu values")
    p_sweep.add_argument("--t", type=float, required=True, help="comparison time")
    p_sweep.add_argument("--n", type=int, default=200, help="node count (default 200)")
    p_sweep.add_argument("--out", default=None, help="output root")

    p_val = sub.add_parser("validate", help="validate a scenario config without running it")
    p_val.add_argument("--config", required=True)
    return parser


def _cmd_run(args) -> int:
    scenario = load_config(Path(args.config).read_text())
    if args.out:
        scenario.output_dir = args.out
    run_scenario(scenario)
    print(f"wrote {scenario.output_dir}")
    return 0


def _cmd_figure(args) -> int:
    for scenario in preset(args.figure_id, n=args.n, out_root=args.out):
        run_scenario(scenario)
        print(f"wrote {scenario.output_dir}")
    return 0


def _cmd_rates(args) -> int:
    if args.window:
        try:
            lo, hi = (float(v) for v in args.window.split(","))
        except ValueError as exc:
            raise ConfigError(f"/window: expected 'a,b', got {args.window!r}") from exc
    else:
        lo, hi = args.t_end / 10.0, args.t_end
    reference = "barenblatt" if args.m > 1 else "selfsim_heat"
    name = f"rates_m{args.m:g}_n{args.n}"
    scenario = Scenario(
        name=name,
        params=SchemeParams(m=args.m),
        mesh_spec={"kind": "uniform", "n": args.n},
        initial_spec={"preset": "indicator", "params": None},
        t_end=args.t_end,
        snapshot_times=_geom_times(max(lo / 2.0, 1e-3), args.t_end, 24),
        reference=reference,
        output_dir=args.out or str(Path(default_output_root()) / name),
    )
    result = run_scenario(scenario)
    ref = make_reference(reference, args.m)
    ts, errs = [], []
    for snap in result.trajectory.snapshots:
        if snap.t <= 0:
            continue
        ts.append(snap.t)
        errs.append(l1_error_paper(reconstruct(snap), ref, snap.t))
    slope, _ = rate_fit(ts, errs, (lo, hi))
    print(f"slope={slope:.6g}")
    return 0


def _cmd_sweep_nu(args) -> int:
    try:
        values = [float(v) for v in args.values.split(",")]
    except ValueError as exc:
        raise ConfigError(f"/values: expected comma-separated numbers, got {args.values!r}") from exc
    root = Path(args.out or default_output_root()) / "sweep_nu"
    ref = make_reference("u_hom", 1.0)
    for nu in values:
        params = SchemeParams(m=1.0, nu=nu)
        scenario = Scenario(
            name=f"sweep_nu_{nu:g}",
            params=params,
            mesh_spec={"kind": "uniform", "n": args.n},
            initial_spec={"preset": "indicator", "params": None},
            t_end=args.t,
            snapshot_times=[args.t],
            reference="u_hom",
            output_dir=str(root / f"nu_{nu:g}"),
        )
        result = run_scenario(scenario)
        final = result.trajectory.snapshots[-1]
        err = l1_error_quadrature(reconstruct(final), ref, final.t)
        print(f"nu={nu:g} l1={err:.6g}")
    return 0


def _cmd_validate(args) -> int:
    load_config(Path(args.config).read_text())
    print("ok")
    return 0


def _geom_times(t0, t1, k):
    import numpy as np

    return sorted(set(float(f"{t:.6g}") for t in np.geomspace(t0, t1, k)))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "figure": _cmd_figure,
        "rates": _cmd_rates,
        "sweep-nu": _cmd_sweep_nu,
        "validate": _cmd_validate,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, MeshError, DensityError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
