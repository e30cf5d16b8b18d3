"""Command line front end.

Subcommands::

    sps run CONFIG [--jobs N] [--engine secular|full-pme] [--rtol X]
                   [--atol X] [--tail-floor X] [--out PATH] [--plot RECIPE]
    sps table-i [--out PATH]
    sps optimum --delta-ac X [--phonons I] [--gamma-x G] [--lo R] [--hi R]
    sps plot CSV --recipe NAME [--out-dir DIR]

Exit codes: 0 success, 1 configuration error, 2 numerical failure on all
sweep points, 3 partial failure (failed points are reported on stderr and
recorded while the sweep continues).
"""

import argparse
import sys

from .exceptions import ConfigError, ParameterError, RecipeError
from .phonons import parse_phonons
from .sweep import (SweepSpec, build_spec, find_optimal_detuning, parse_config,
                    phonon_table_rows, run_sweep)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sps",
        description="Figures-of-merit simulator for a cw-dressed, "
                    "frequency-tunable single-photon source.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a sweep from a config file")
    run_p.add_argument("config", help="flat key = value sweep description")
    run_p.add_argument("--jobs", type=int, default=None,
                       help="worker processes (default: from config, else 1)")
    run_p.add_argument("--engine", choices=("secular", "full-pme"), default=None)
    run_p.add_argument("--rtol", type=float, default=None)
    run_p.add_argument("--atol", type=float, default=None)
    run_p.add_argument("--tail-floor", type=float, default=None, dest="tail_floor")
    run_p.add_argument("--out", default=None, help="CSV output path")
    run_p.add_argument("--plot", action="append", default=[],
                       help="render a recipe next to the CSV (repeatable)")

    table_p = sub.add_parser("table-i", help="phonon presets with <B> and "
                                             "sideband efficiencies")
    table_p.add_argument("--out", default=None, help="also write a CSV here")

    opt_p = sub.add_parser("optimum", help="detuning that maximizes the "
                                           "dominant-sidepeak indistinguishability")
    opt_p.add_argument("--delta-ac", type=float, required=True,
                       help="target shift magnitude, ueV")
    opt_p.add_argument("--phonons", default="I", help="I, II, III or none")
    opt_p.add_argument("--gamma-x", type=float, default=1.32, dest="gamma_x")
    opt_p.add_argument("--temperature", type=float, default=4.0)
    opt_p.add_argument("--lo", type=float, default=2.0,
                       help="lower delta/|Delta_ac| search bound")
    opt_p.add_argument("--hi", type=float, default=60.0)
    opt_p.add_argument("--engine", choices=("secular", "full-pme"), default="secular")

    plot_p = sub.add_parser("plot", help="render figures from a sweep CSV")
    plot_p.add_argument("csv")
    plot_p.add_argument("--recipe", required=True, action="append",
                        help="recipe name or xy:COL,... (repeatable)")
    plot_p.add_argument("--out-dir", default=None, dest="out_dir")
    return parser


def _cmd_run(args) -> int:
    try:
        values = parse_config(args.config)
        overrides = {"engine": args.engine, "rtol": args.rtol, "atol": args.atol,
                     "tail_floor": args.tail_floor, "out": args.out,
                     "jobs": args.jobs}
        spec = build_spec(values, overrides)
    except (ConfigError, ParameterError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    result = run_sweep(spec)
    for failure in result.failures:
        print(f"point failed: {failure}", file=sys.stderr)
    print(f"wrote {result.path} ({len(result.rows)} rows, "
          f"{len(result.failures)} failed points)")
    for recipe in args.plot:
        try:
            from .plots import emit_plots
            for path in emit_plots(result.path, recipe):
                print(f"wrote {path}")
        except RecipeError as exc:
            print(f"plot error: {exc}", file=sys.stderr)
            return 1
    return result.exit_code


def _cmd_table(args) -> int:
    rows = phonon_table_rows()
    header = f"{'set':>4} {'alpha(ps^2)':>12} {'omega_b(meV)':>13} " \
             f"{'<B>':>7} {'eta_eff(%)':>11} {'eta_eff_cav(%)':>15}"
    print(header)
    for row in rows:
        print(f"{row['preset']:>4} {row['alpha_ps2']:>12.3f} "
              f"{row['omega_b_mev']:>13.2f} {row['B']:>7.3f} "
              f"{row['eta_eff_pct']:>11.1f} {row['eta_eff_cav_pct']:>15.1f}")
    if args.out:
        spec = SweepSpec(mode="phonon-table", out=args.out)
        result = run_sweep(spec)
        print(f"wrote {result.path}")
    return 0


def _cmd_optimum(args) -> int:
    try:
        bath = parse_phonons(args.phonons, temperature=args.temperature)
    except ParameterError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    result = find_optimal_detuning(args.delta_ac, bath, gamma_X=args.gamma_x,
                                   lo=args.lo, hi=args.hi, engine=args.engine)
    kind = "interior maximum" if result.interior else "boundary (no interior maximum)"
    print(f"delta_opt = {result.delta_opt:.6g} ueV "
          f"(delta/|Delta_ac| = {result.ratio_opt:.4g}), "
          f"I_max = {result.i_max:.6f} [{kind}]")
    return 0


def _cmd_plot(args) -> int:
    try:
        from .plots import emit_plots
        for recipe in args.recipe:
            for path in emit_plots(args.csv, recipe, out_dir=args.out_dir):
                print(f"wrote {path}")
    except (RecipeError, OSError) as exc:
        print(f"plot error: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "table-i":
        return _cmd_table(args)
    if args.command == "optimum":
        return _cmd_optimum(args)
    if args.command == "plot":
        return _cmd_plot(args)
    return 1


if __name__ == "__main__":
    sys.exit(main())
