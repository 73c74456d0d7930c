# main.py
"""
Index Policy Evaluation Toolkit

Command-line entry point. Parses arguments, loads and overrides the
configuration, and dispatches to the subcommands:

    simulate      write simulated trial datasets
    estimate      evaluate estimators on a dataset file
    coverage      Monte-Carlo coverage of the configured plan
    sweep         coverage along a parameter grid
    corner-case   base vs subgroup vs hybrid on the corner-case domain
    compare       interval for the difference of two policies
    init-config   write the default configuration

Exit codes: 0 success, 2 input or configuration error, 3 data-invariant
violation, 4 numerical failure.
"""

import argparse
import logging
import sys
from typing import List, Optional

from src.core.errors import PolicyEvalError
from src.core.types import EstimatorName
from src.experiments.plan import SWEEP_AXES
from src.utils import (
    FULL_SCALE,
    Profiler,
    apply_override,
    apply_overrides,
    display_banner,
    load_config,
    setup_logger,
)
from src.utils.commands import (
    cmd_compare,
    cmd_corner_case,
    cmd_coverage,
    cmd_estimate,
    cmd_init_config,
    cmd_simulate,
    cmd_sweep,
)

ESTIMATOR_CHOICES = [e.value for e in EstimatorName]


def build_parser() -> argparse.ArgumentParser:
    """
    Argument parser with global flags and one subparser per command.
    """
    parser = argparse.ArgumentParser(prog="policy-eval", description="Index policy evaluation from RCT data")
    parser.add_argument('--config', type=str, default=None,
                        help="Path to a JSON configuration file (defaults when omitted)")
    parser.add_argument('--set', dest='overrides', action='append', default=[], metavar='KEY=VALUE',
                        help="Override a configuration value, e.g. --set policy.alpha=0.1 (repeatable)")
    parser.add_argument('--full-scale', action='store_true',
                        help="Use n=5000 agents per arm and 1000 replicates")
    parser.add_argument('--workers', type=int, default=None,
                        help="Worker processes for replicate-level parallelism")
    parser.add_argument('--log-dir', type=str, default=None,
                        help="Also write a timestamped run log into this directory")
    parser.add_argument('--verbose', action='store_true', help="Log debug messages to the console")
    subparsers = parser.add_subparsers(dest="command", required=True)

    simulate = subparsers.add_parser("simulate", help="Write simulated trial datasets")
    simulate.add_argument('--out-dir', type=str, default=None, help="Output directory (config output.dir)")
    simulate.set_defaults(handler=cmd_simulate)

    estimate = subparsers.add_parser("estimate", help="Evaluate estimators on a dataset CSV")
    estimate.add_argument('dataset', type=str, help="Dataset CSV path")
    estimate.add_argument('--estimator', action='append', choices=ESTIMATOR_CHOICES, default=None,
                          help="Estimator to evaluate (repeatable; config experiment.estimators by default)")
    estimate.add_argument('--level', type=float, default=None, help="Confidence level")
    estimate.add_argument('--truncate', type=int, default=None, help="Sum only the first T' reward timesteps")
    estimate.add_argument('--upto-round', type=int, default=None,
                          help="Subgroup estimators: analyse only the first rounds")
    estimate.add_argument('--weight', type=str, default=None, help="Hybrid weight, a number or 'auto'")
    estimate.add_argument('--alpha', type=float, default=None,
                          help="Treatment fraction when the dataset has no metadata")
    estimate.add_argument('--rounds', type=int, default=None,
                          help="Allocation rounds when the dataset has no metadata")
    estimate.add_argument('--subgroup-variance', choices=["sg_simple", "sg_knn", "welch"], default=None)
    estimate.add_argument('--base-variance', choices=["base_knn", "welch"], default=None)
    estimate.add_argument('--k', type=int, default=None, help="Order-statistic window of plug-in variances")
    estimate.add_argument('--ols-cov', choices=["classical", "robust"], default=None)
    estimate.add_argument('--output', type=str, default=None, help="Also write the reports to this JSON file")
    estimate.set_defaults(handler=cmd_estimate)

    coverage = subparsers.add_parser("coverage", help="Monte-Carlo coverage of the configured plan")
    coverage.add_argument('--out-dir', type=str, default=None, help="Output directory (config output.dir)")
    coverage.set_defaults(handler=cmd_coverage)

    sweep = subparsers.add_parser("sweep", help="Coverage along a parameter grid")
    sweep.add_argument('--axis', choices=SWEEP_AXES, default=None, help="Swept parameter")
    sweep.add_argument('--values', type=float, nargs='+', default=None, help="Grid values")
    sweep.add_argument('--out-dir', type=str, default=None, help="Output directory (config output.dir)")
    sweep.set_defaults(handler=cmd_sweep)

    corner = subparsers.add_parser("corner-case", help="Corner-case estimator comparison")
    corner.add_argument('--sigma', type=float, default=None, help="Boost bandwidth (config corner_case.sigma)")
    corner.add_argument('--out-dir', type=str, default=None, help="Output directory (config output.dir)")
    corner.set_defaults(handler=cmd_corner_case)

    compare = subparsers.add_parser("compare", help="Compare two policies from report JSON files")
    compare.add_argument('first', type=str, help="Report JSON of the first policy")
    compare.add_argument('second', type=str, help="Report JSON of the second policy")
    compare.add_argument('--estimator', choices=ESTIMATOR_CHOICES, default=None,
                         help="Report to use when a file holds several")
    compare.add_argument('--level', type=float, default=None, help="Confidence level")
    compare.set_defaults(handler=cmd_compare)

    init = subparsers.add_parser("init-config", help="Write the default configuration")
    init.add_argument('path', type=str, help="Destination JSON path")
    init.add_argument('--force', action='store_true', help="Overwrite an existing file")
    init.set_defaults(handler=cmd_init_config)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one command and return its exit code.
    """
    args = build_parser().parse_args(argv)
    logger = setup_logger(log_dir=args.log_dir, level=logging.DEBUG if args.verbose else logging.INFO)
    if args.command in ("coverage", "sweep", "corner-case"):
        display_banner(args.command)

    profiler = Profiler()
    profiler.start_global_timer()
    try:
        config = load_config(args.config, logger=logger)
        if args.full_scale:
            for key_path, value in FULL_SCALE.items():
                apply_override(config, key_path, value)
            logger.info("[+] Full-scale settings applied")
        apply_overrides(config, args.overrides)
        code = args.handler(args, config, profiler, logger)
    except PolicyEvalError as e:
        logger.debug(f"[X] {type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        logger.debug(f"[X] {type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 2

    profiler.end_global_timer()
    logger.info(profiler.generate_report())
    logger.info("[+] Execution Complete.")
    return code


if __name__ == "__main__":
    sys.exit(main())
