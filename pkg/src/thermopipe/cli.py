"""Command-line front end: ``thermopipe <command> --help`` for details."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from .analytic import build_kernel
from .identification import MeasurementSet, identify
from .models import run_model
from .output import FLOAT_FORMAT
from .scenario import Scenario, ScenarioError, resolve_params, run_scenario
from .signals import BoundaryConditions, characteristic_time, parse_signal, solve_delay


def _key_ranges(items, what):
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"--{what} expects name=value, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def cmd_simulate(args):
    if args.scenario:
        scenario = Scenario.from_file(args.scenario)
        models = [args.model] if args.model else scenario.models
        target = scenario.resolved_output_dir(args.out)
        target.mkdir(parents=True, exist_ok=True)
        status = 0
        for name in models:
            try:
                out = run_model(name, scenario.params, scenario.bc, scenario.t_end, dt=scenario.dt,
                                output_dt=scenario.output_dt, probes=scenario.probes, initial=scenario.initial,
                                pde_dt=scenario.pde_dt)
            except ValueError as exc:
                print(f"{name}: {exc}", file=sys.stderr)
                status = 1
                continue
            out.to_csv(target / f"{name}.csv")
            print(target / f"{name}.csv")
        return status

    if not (args.model and args.v and args.tin and args.tamb and args.t_end):
        raise ValueError("without --scenario, give --model, --v, --tin, --tamb and --t-end")
    params = resolve_params(args.params)
    bc = BoundaryConditions(
        parse_signal(args.v, "v", positive=True), parse_signal(args.tin, "Tin"), parse_signal(args.tamb, "Tamb")
    )
    out = run_model(args.model, params, bc, args.t_end, dt=args.dt, output_dt=args.output_dt,
                    probes=args.probe or (), initial=args.initial)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        out.to_csv(args.out)
    else:
        out.to_csv(sys.stdout)
    return 0


def cmd_compare(args):
    scenario = Scenario.from_file(args.scenario)
    report = run_scenario(scenario, output_dir=args.out)
    print(report.to_text(include_runtime=args.runtime), end="")
    failed = [m for m, r in report.results.items() if r.status != "ok"]
    return 1 if failed else 0


def cmd_identify(args):
    params = resolve_params(args.params)
    meas = MeasurementSet.from_csv(args.data, probe_position=args.probe_position, ambient=args.ambient)
    bounds = {k: tuple(float(x) for x in v.split(":")) for k, v in _key_ranges(args.bounds, "bounds").items()}
    guess = {k: float(v) for k, v in _key_ranges(args.guess, "guess").items()}
    result = identify(meas, args.model, params=params, bounds=bounds, initial_guess=guess,
                      fit_wall=args.fit_wall, dt=args.dt, maxiter=args.maxiter)
    text = result.to_report()
    if args.out:
        Path(args.out).write_text(text)
    print(text, end="")
    return 0


def cmd_delay(args):
    v = parse_signal(args.v, "v", positive=True)
    times = np.asarray(args.t, dtype=float)
    if args.distance is not None:
        for tau in np.atleast_1d(solve_delay(v, times, args.distance)):
            print(float(tau))
        return 0
    if args.z is None or args.length is None:
        raise ValueError("give --distance, or --z together with --length")
    phi = np.atleast_1d(characteristic_time(v, args.z, times, args.length))
    print("t,tau,phi,v_del")
    for t, p in zip(times, phi):
        print(",".join(FLOAT_FORMAT.format(x) for x in (t, t - p, p, v(p))))
    return 0


def cmd_kernel(args):
    params = resolve_params(args.params)
    h1, h2 = params.derived.h1, params.derived.h2
    kernel = build_kernel(args.z, h1, h2, args.v, args.dt)
    lines = ["t,g,mass"]
    for t, g, m in zip(kernel.t, kernel.g, kernel.sample_mass()):
        lines.append(",".join(FLOAT_FORMAT.format(x) for x in (t, g, m)))
    text = "\n".join(lines) + "\n"
    summary = f"dirac_weight = {kernel.dirac_weight:.9g}\ntotal_mass = {kernel.mass:.9g}\n"
    if args.out:
        Path(args.out).write_text(text)
        print(summary, end="")
    else:
        sys.stdout.write(text)
        sys.stderr.write(summary)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="thermopipe", description="Thermal pipe-flow models and their comparison.")
    parser.add_argument("--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one or more models and write their CSV output")
    p.add_argument("--scenario", help="scenario file; runs its models unless --model is given")
    p.add_argument("--model", help="pde<n>, simplified_pde<n>, dpde<n>, ode, dde or adapted_dde")
    p.add_argument("--params", default="simulation", help="preset (simulation, measurement) or parameter file")
    p.add_argument("--v", help="velocity signal, e.g. const:0.5 or csv:flow.csv")
    p.add_argument("--tin", help="inlet temperature signal, e.g. ramp:0,50,20,60")
    p.add_argument("--tamb", help="ambient temperature signal")
    p.add_argument("--t-end", type=float, help="simulated time in seconds")
    p.add_argument("--dt", type=float, help="step for delay and lumped models (default 0.05 s)")
    p.add_argument("--output-dt", type=float, help="recording interval in seconds")
    p.add_argument("--initial", type=float, help="uniform initial temperature")
    p.add_argument("--probe", type=float, action="append", help="interior position in metres (repeatable)")
    p.add_argument("--out", help="output CSV (inline mode) or directory (scenario mode)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="run a scenario and report errors against its reference model")
    p.add_argument("--scenario", required=True, help="scenario file")
    p.add_argument("--out", help="output directory (default from the scenario or $THERMOPIPE_OUTPUT_DIR)")
    p.add_argument("--runtime", action="store_true", help="include per-model runtimes in the printed report")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("identify", help="fit heat-transfer coefficients to a measurement CSV")
    p.add_argument("--data", required=True, help="CSV with columns t,Tin,Tout[,Tw_out][,Tm_probe],v,Tamb")
    p.add_argument("--model", default="pde40", help="pde<n>, dpde<n> or adapted_dde (default pde40)")
    p.add_argument("--params", default="measurement", help="preset or parameter file supplying geometry and start values")
    p.add_argument("--fit-wall", action="store_true", help="include the outlet wall temperature in the residual")
    p.add_argument("--bounds", action="append", metavar="NAME=LO:HI", help="search interval (repeatable)")
    p.add_argument("--guess", action="append", metavar="NAME=VALUE", help="start value (repeatable)")
    p.add_argument("--ambient", type=float, help="constant ambient temperature instead of the Tamb column")
    p.add_argument("--probe-position", type=float, help="position of the Tm_probe column in metres")
    p.add_argument("--dt", type=float, help="integrator step for delay and lumped models")
    p.add_argument("--maxiter", type=int, default=500, help="simplex iteration cap (default 500)")
    p.add_argument("--out", help="write the fit report here as well")
    p.set_defaults(func=cmd_identify)

    p = sub.add_parser("delay", help="transport delay or characteristic time for a velocity signal")
    p.add_argument("--v", required=True, help="velocity signal, e.g. const:0.5 or csv:flow.csv")
    p.add_argument("--t", type=float, nargs="+", required=True, help="arrival time(s) in seconds")
    p.add_argument("--distance", type=float, help="travelled distance in metres; prints one delay per time")
    p.add_argument("--z", type=float, help="position in metres (with --length): prints t,tau,phi,v_del")
    p.add_argument("--length", type=float, help="pipe length in metres")
    p.set_defaults(func=cmd_delay)

    p = sub.add_parser("kernel", help="impulse response of the insulated pipe at constant flow")
    p.add_argument("--z", type=float, required=True, help="position in metres")
    p.add_argument("--v", type=float, required=True, help="constant velocity in m/s")
    p.add_argument("--params", default="simulation", help="preset or parameter file (h1, h2 are used)")
    p.add_argument("--dt", type=float, default=0.1, help="sampling step upper bound in seconds")
    p.add_argument("--out", help="CSV path; without it the CSV goes to stdout and the summary to stderr")
    p.set_defaults(func=cmd_kernel)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ScenarioError, ValueError, FileNotFoundError, RuntimeError) as exc:
        print(f"thermopipe {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
