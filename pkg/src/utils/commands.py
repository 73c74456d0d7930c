"""
Index Policy Evaluation Toolkit

Module: commands.py

Bodies of the command-line subcommands. Each command takes the parsed
arguments, the validated configuration, a Profiler and a logger, writes its
results, and returns the process exit code. Errors propagate as
PolicyEvalError subclasses; main.py maps them to exit codes.
"""

import json
import os
from typing import Any, Dict, List, Optional, Union

import numpy as np

from src.core.errors import ArgumentError, ConfigurationError
from src.core.types import CoverageSummary, EstimatorName
from src.experiments.corner_case import corner_case_study
from src.experiments.coverage import coverage_experiment, sweep
from src.experiments.plan import SUBGROUP_ONLY, plan_from_config, policy_from_config, resolve_pool, simulator_from_config
from src.experiments.runner import ReplicateRunner, spawn_seeds
from src.inference.intervals import compare_policies
from src.inference.reporting import InferenceSettings, evaluate_estimator
from src.simulators.rct import make_sampler, simulate_trial
from src.utils.bootstrap import DEFAULT_CONFIG, resolve_workers, save_config
from src.utils.display import display_corner_case_table, display_coverage_table
from src.utils.io import (
    coverage_series,
    read_dataset_csv,
    read_report_json,
    reports_to_json,
    write_coverage_csv,
    write_dataset_csv,
    write_reports_json,
    write_rows_csv,
    write_series_json,
)
from src.utils.logger import LoggerType
from src.utils.profiler import Profiler


def _output_dir(args: Any, config: Dict[str, Any]) -> str:
    out_dir = getattr(args, "out_dir", None) or config["output"]["dir"]
    os.makedirs(out_dir, exist_ok=True)
    return out_dir


def _runner(args: Any, config: Dict[str, Any], logger: LoggerType) -> ReplicateRunner:
    return ReplicateRunner(num_workers=resolve_workers(getattr(args, "workers", None), config), logger=logger)


def _parse_weight(raw: Optional[str]) -> Optional[Union[float, str]]:
    if raw is None or raw == "auto":
        return raw
    try:
        return float(raw)
    except ValueError:
        raise ArgumentError(f"--weight must be a number or 'auto', got '{raw}'") from None


def cmd_simulate(args: Any, config: Dict[str, Any], profiler: Profiler, logger: LoggerType) -> int:
    """
    Simulate trials and write one dataset CSV per requested dataset.

    Dataset i uses the seed of coverage replicate i, so estimating it
    reproduces that replicate's in-process estimates.
    """
    logger.info("=== Command: simulate ===")
    simulator = simulator_from_config(config)
    policy = policy_from_config(config)
    count = int(config["output"]["datasets"])
    if count < 1:
        raise ConfigurationError(f"output.datasets must be at least 1, got {count}")
    out_dir = _output_dir(args, config)

    with profiler.timer("Sampler"):
        sampler = make_sampler(simulator, policy, resolve_pool(simulator, logger), logger=logger)

    seeds = spawn_seeds(config["experiment"]["seed"], count, stream=1)
    with profiler.timer("Simulate"):
        for replicate_id, seed in enumerate(seeds):
            data = simulate_trial(sampler, simulator.horizon, np.random.default_rng(seed), seed=replicate_id)
            path = os.path.join(out_dir, f"dataset_{replicate_id:04d}.csv")
            write_dataset_csv(data, path, domain=simulator.domain_tag, logger=logger)
    logger.info(f"[+] Simulated {count} dataset(s) into {out_dir}")
    return 0


def cmd_estimate(args: Any, config: Dict[str, Any], profiler: Profiler, logger: LoggerType) -> int:
    """
    Evaluate estimators on a dataset file and print one JSON report per line.
    """
    logger.info("=== Command: estimate ===")
    with profiler.timer("Read Dataset"):
        data = read_dataset_csv(args.dataset, alpha=args.alpha, rounds=args.rounds, logger=logger)

    inference = dict(config["inference"])
    for key in ("subgroup_variance", "base_variance", "k", "ols_cov"):
        value = getattr(args, key, None)
        if value is not None:
            inference[key] = value
    level = args.level if args.level is not None else config["experiment"]["level"]
    settings = InferenceSettings.from_config(inference, level=level)
    weight = _parse_weight(args.weight)

    names = [EstimatorName(e) for e in (args.estimator or config["experiment"]["estimators"])]
    reports = []
    with profiler.timer("Estimate"):
        for name in names:
            upto_round = args.upto_round if name in SUBGROUP_ONLY else None
            if args.upto_round is not None and upto_round is None:
                logger.warning(f"[!] --upto-round does not apply to {name.value}; using all rounds")
            report = evaluate_estimator(
                data, name, settings, truncate_at=args.truncate, upto_round=upto_round, weight=weight, logger=logger
            )
            reports.append(report)

    print(reports_to_json(reports))
    if args.output:
        write_reports_json(reports, args.output)
        logger.info(f"[+] Reports written to {args.output}")
    return 0


def _write_coverage(
    summaries: List[CoverageSummary], out_dir: str, stem: str, logger: LoggerType
) -> None:
    csv_path = write_coverage_csv(summaries, os.path.join(out_dir, f"{stem}.csv"))
    series_path = write_series_json(coverage_series(summaries), os.path.join(out_dir, f"{stem}_series.json"))
    display_coverage_table(summaries)
    logger.info(f"[+] Coverage written to {csv_path} and {series_path}")


def _run_coverage(
    config: Dict[str, Any], args: Any, profiler: Profiler, logger: LoggerType, stem: str
) -> int:
    with profiler.timer("Plan"):
        plan = plan_from_config(config, logger=logger)
    runner = _runner(args, config, logger)
    out_dir = _output_dir(args, config)

    if plan.sweep_axis is None:
        with profiler.timer("Coverage"):
            summaries = list(coverage_experiment(plan, runner=runner, logger=logger).values())
    else:
        with profiler.timer("Sweep"):
            results = sweep(plan, runner=runner, logger=logger)
        summaries = [summary for _, by_name in results for summary in by_name.values()]
    _write_coverage(summaries, out_dir, stem, logger)
    return 0


def cmd_coverage(args: Any, config: Dict[str, Any], profiler: Profiler, logger: LoggerType) -> int:
    """
    Coverage experiment of the configured plan; a configured sweep runs in full.
    """
    logger.info("=== Command: coverage ===")
    return _run_coverage(config, args, profiler, logger, stem="coverage")


def cmd_sweep(args: Any, config: Dict[str, Any], profiler: Profiler, logger: LoggerType) -> int:
    """
    Coverage experiment along a grid given by --axis/--values or experiment.sweep.
    """
    logger.info("=== Command: sweep ===")
    if args.axis is not None or args.values is not None:
        if args.axis is None or not args.values:
            raise ArgumentError("--axis and --values must be given together")
        config["experiment"]["sweep"] = {"axis": args.axis, "values": list(args.values)}
    if not config["experiment"]["sweep"]:
        raise ConfigurationError("no sweep configured; set experiment.sweep or pass --axis and --values")
    return _run_coverage(config, args, profiler, logger, stem="sweep")


def cmd_corner_case(args: Any, config: Dict[str, Any], profiler: Profiler, logger: LoggerType) -> int:
    """
    Corner-case comparison of base, subgroup and hybrid estimators.
    """
    logger.info("=== Command: corner-case ===")
    section = config["corner_case"]
    sigma = args.sigma if args.sigma is not None else section["sigma"]
    runner = _runner(args, config, logger)
    with profiler.timer("Corner Case"):
        results = corner_case_study(
            n=section["n"],
            alpha=section["alpha"],
            sigma=sigma,
            replicates=section["replicates"],
            level=config["experiment"]["level"],
            seed=config["experiment"]["seed"],
            center=config["simulator"]["corner_center"],
            k=config["inference"]["k"],
            runner=runner,
            logger=logger,
        )
    out_dir = _output_dir(args, config)
    path = write_rows_csv([r.to_row() for r in results.values()], os.path.join(out_dir, "corner_case.csv"))
    display_corner_case_table(results.values())
    logger.info(f"[+] Corner-case results written to {path}")
    return 0


def cmd_compare(args: Any, config: Dict[str, Any], profiler: Profiler, logger: LoggerType) -> int:
    """
    Interval for the difference of two policies from their report files.
    """
    logger.info("=== Command: compare ===")
    first = read_report_json(args.first, estimator=args.estimator)
    second = read_report_json(args.second, estimator=args.estimator)
    level = args.level if args.level is not None else config["experiment"]["level"]
    low, high = compare_policies(first, second, level=level)
    result = {
        "estimator_1": first.estimator.value,
        "estimator_2": second.estimator.value,
        "difference": float(f"{first.point - second.point:.9g}"),
        "ci_low": float(f"{low:.9g}"),
        "ci_high": float(f"{high:.9g}"),
        "level": level,
    }
    print(json.dumps(result))
    return 0


def cmd_init_config(args: Any, config: Dict[str, Any], profiler: Profiler, logger: LoggerType) -> int:
    """Write the default configuration to a file."""
    logger.info("=== Command: init-config ===")
    if os.path.exists(args.path) and not args.force:
        raise ArgumentError(f"{args.path} exists; pass --force to overwrite it")
    save_config(DEFAULT_CONFIG, args.path, logger=logger)
    return 0
