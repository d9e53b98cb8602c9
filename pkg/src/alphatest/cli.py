"""Command-line interface.

Subcommands: ``test`` runs the three alpha tests on a CSV panel,
``simulate`` writes a synthetic panel, ``mc`` runs a Monte Carlo study,
``rolling`` evaluates the tests over rolling windows, and ``diagnose``
reports per-security Box-Pierce residual diagnostics. Exit codes: 0 on
success, 1 on usage errors, 2 on data errors, 3 on numerical degeneracy.
"""

import argparse
import json
import os
import sys

from .combine import cauchy_combine, min_p_combine
from .diagnostics import DEFAULT_LAGS, residual_diagnostics
from .dgp import generate_panel
from .exceptions import DataFormatError, DegenerateEstimateError, StudyError
from .maxtest import max_test
from .panel_io import load_panel, load_study_config, write_panel
from .regression import default_bandwidth, fit_factor_model
from .rolling import rolling_test
from .study import SCHEMA_VERSION, run_study
from .sumtest import sum_test

USAGE_ERROR, DATA_ERROR, NUMERIC_ERROR = 1, 2, 3


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="alphatest",
        description="Zero-alpha tests for high-dimensional factor pricing panels "
                    "with serially dependent errors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    test = sub.add_parser("test", help="run the sum, max, and combination tests on a CSV panel")
    _panel_flags(test)
    test.add_argument("--bandwidth", type=int, default=None, help="truncation lag override")
    _format_flags(test)

    simulate = sub.add_parser("simulate", help="write a synthetic panel from a config file")
    simulate.add_argument("--config", required=True, help="key=value study config file")
    simulate.add_argument("--out", required=True, help="output directory")
    simulate.add_argument("--seed", type=int, default=None, help="seed override")

    mc = sub.add_parser("mc", help="run a Monte Carlo size/power study")
    mc.add_argument("--config", required=True, help="key=value study config file")
    mc.add_argument("--reps", type=int, default=1000)
    mc.add_argument("--seed", type=int, default=None, help="base seed override")
    mc.add_argument("--out", default=None, help="output path prefix (.csv and .json)")
    mc.add_argument("--workers", type=int, default=1)
    mc.add_argument("--methods", default="sum,max,cc", help="comma-separated method list")

    rolling = sub.add_parser("rolling", help="rolling-window tests over a CSV panel")
    _panel_flags(rolling)
    rolling.add_argument("--window", type=int, default=260)
    rolling.add_argument("--step", type=int, default=1)
    rolling.add_argument("--bandwidth", type=int, default=None)
    _format_flags(rolling)

    diagnose = sub.add_parser("diagnose", help="Box-Pierce residual diagnostics per security")
    _panel_flags(diagnose)
    diagnose.add_argument("--lags", type=int, default=DEFAULT_LAGS)
    diagnose.add_argument("--bins", type=int, default=10)
    _format_flags(diagnose)
    return parser


def _panel_flags(sub):
    sub.add_argument("--returns", required=True, help="returns CSV (date,<id>,...)")
    sub.add_argument("--factors", required=True, help="factors CSV (date,mkt_rf,smb,hml,rf)")


def _format_flags(sub):
    fmt = sub.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="emit JSON")
    fmt.add_argument("--csv", action="store_true", help="emit CSV (default)")
    sub.add_argument("--out", default=None, help="write output to this path instead of stdout")


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)


def _cmd_test(args):
    panel = load_panel(args.returns, args.factors)
    fit = fit_factor_model(panel)
    bandwidth = args.bandwidth
    if bandwidth is None:
        bandwidth = default_bandwidth(panel.n_securities, panel.n_periods)
    sum_outcome = sum_test(fit, bandwidth)
    max_outcome = max_test(fit, bandwidth)
    cc = cauchy_combine(max_outcome.p_value, sum_outcome.p_value)
    min_p = min_p_combine(max_outcome.p_value, sum_outcome.p_value)
    outcomes = [sum_outcome, max_outcome, cc, min_p]
    if args.json:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "kind": "test_report",
            "N": panel.n_securities,
            "T": panel.n_periods,
            "bandwidth": bandwidth,
            "results": [
                {
                    "method": o.method,
                    "statistic": o.statistic,
                    "adjusted": o.adjusted,
                    "p_value": o.p_value,
                }
                for o in outcomes
            ],
        }
        _emit(json.dumps(payload, sort_keys=True) + "\n", args.out)
    else:
        rows = ["method,statistic,adjusted,p_value"]
        for o in outcomes:
            adjusted = "" if o.adjusted is None else repr(o.adjusted)
            rows.append(f"{o.method},{o.statistic!r},{adjusted},{o.p_value!r}")
        _emit("\n".join(rows) + "\n", args.out)
    return 0


def _cmd_simulate(args):
    spec = load_study_config(args.config)
    config = spec.dgp
    if args.seed is not None:
        from dataclasses import replace

        config = replace(config, seed=args.seed)
    sim = generate_panel(config)
    os.makedirs(args.out, exist_ok=True)
    returns_path = os.path.join(args.out, "returns.csv")
    factors_path = os.path.join(args.out, "factors.csv")
    write_panel(sim.panel, returns_path, factors_path)
    truth_path = os.path.join(args.out, "truth.json")
    with open(truth_path, "w", encoding="utf-8") as handle:
        json.dump(
            {
                "schema_version": SCHEMA_VERSION,
                "kind": "panel_truth",
                "alphas": list(map(float, sim.alphas)),
                "betas": [list(map(float, row)) for row in sim.betas],
                "seed": config.seed,
            },
            handle,
            sort_keys=True,
        )
    sys.stdout.write(f"wrote {returns_path}, {factors_path}, {truth_path}\n")
    return 0


def _cmd_mc(args):
    spec = load_study_config(args.config)
    methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    result = run_study(
        spec.dgp,
        methods=methods,
        reps=args.reps,
        base_seed=args.seed,
        gamma=spec.gamma,
        bandwidth=spec.bandwidth,
        workers=args.workers,
    )
    csv_text = result.to_csv()
    if args.out is None:
        sys.stdout.write(csv_text)
    else:
        with open(f"{args.out}.csv", "w", encoding="utf-8") as handle:
            handle.write(csv_text)
        with open(f"{args.out}.json", "w", encoding="utf-8") as handle:
            handle.write(result.to_json() + "\n")
        sys.stdout.write(f"wrote {args.out}.csv and {args.out}.json\n")
    return 0


def _cmd_rolling(args):
    panel = load_panel(args.returns, args.factors)
    report = rolling_test(panel, window=args.window, step=args.step, bandwidth=args.bandwidth)
    _emit(report.to_json() + "\n" if args.json else report.to_csv(), args.out)
    return 0


def _cmd_diagnose(args):
    panel = load_panel(args.returns, args.factors)
    fit = fit_factor_model(panel)
    report = residual_diagnostics(
        fit, security_ids=panel.security_ids, lags=args.lags, bins=args.bins
    )
    _emit(report.to_json() + "\n" if args.json else report.to_csv(), args.out)
    return 0


_COMMANDS = {
    "test": _cmd_test,
    "simulate": _cmd_simulate,
    "mc": _cmd_mc,
    "rolling": _cmd_rolling,
    "diagnose": _cmd_diagnose,
}


def cli_main(argv=None):
    """Entry point returning an exit code instead of raising SystemExit."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else USAGE_ERROR
    try:
        return _COMMANDS[args.command](args)
    except DataFormatError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return DATA_ERROR
    except (DegenerateEstimateError, StudyError) as exc:
        print(f"numerical degeneracy: {exc}", file=sys.stderr)
        return NUMERIC_ERROR


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
