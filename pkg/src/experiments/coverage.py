"""
Index Policy Evaluation Toolkit

Module: coverage.py

Coverage experiments: simulate many independent trials, compute every
requested estimator with its interval, and tally how often the intervals lie
below, contain, or lie above the Monte-Carlo estimand. A sweep repeats the
experiment along one parameter grid.
"""

from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.core.errors import ConfigurationError, NumericalError
from src.core.types import CoverageSummary, EstimatorName
from src.experiments.estimand import monte_carlo_estimand
from src.experiments.plan import ExperimentPlan
from src.experiments.runner import ReplicateRunner, spawn_seeds
from src.inference.reporting import evaluate_estimator
from src.simulators.rct import simulate_trial
from src.utils.logger import LoggerType, get_logger


# (point, ci_low, ci_high) of one estimator in one trial
Estimate = Tuple[float, Optional[float], Optional[float]]


@dataclass(frozen=True)
class ReplicateOutcome:
    """
    Estimates of one trial.

    Attributes:
        replicate_id (int): Position of the trial in the plan
        estimates (dict): Estimator name to (point, ci_low, ci_high)
        failures (dict): Estimator name to the numerical error it raised
    """
    replicate_id: int
    estimates: Dict[str, Estimate] = field(default_factory=dict)
    failures: Dict[str, str] = field(default_factory=dict)


def run_replicate(plan: ExperimentPlan, replicate_id: int, seed: np.random.SeedSequence) -> ReplicateOutcome:
    """
    Simulate one trial and evaluate every estimator of the plan on it.

    Numerical failures of single estimators are recorded, not raised.
    """
    rng = np.random.default_rng(seed)
    data = simulate_trial(plan.sampler(), plan.horizon, rng, seed=replicate_id)
    outcome = ReplicateOutcome(replicate_id=replicate_id)
    for name in plan.estimators:
        try:
            report = evaluate_estimator(
                data, name, plan.inference, truncate_at=plan.truncate_at, upto_round=plan.upto_round
            )
        except NumericalError as e:
            outcome.failures[name.value] = str(e)
            continue
        outcome.estimates[name.value] = (report.point, report.ci_low, report.ci_high)
    return outcome


def _replicate_task(args: Tuple[ExperimentPlan, int, np.random.SeedSequence]) -> ReplicateOutcome:
    return run_replicate(*args)


def summarize(
    name: str,
    outcomes: List[ReplicateOutcome],
    estimand: float,
) -> CoverageSummary:
    """
    Tally the intervals of one estimator against the estimand.

    Args:
        name: Estimator name
        outcomes: Replicate outcomes, in replicate order
        estimand: Value the intervals are scored against

    Returns:
        CoverageSummary: Counted fractions, normalised by the scored replicates
    """
    points, lows, highs = [], [], []
    failures = 0
    for outcome in outcomes:
        if name in outcome.failures:
            failures += 1
            continue
        point, low, high = outcome.estimates[name]
        points.append(point)
        if low is not None:
            lows.append(low)
            highs.append(high)

    lows, highs = np.asarray(lows), np.asarray(highs)
    scored = int(lows.shape[0])
    mean_point = float(np.mean(points)) if points else float("nan")
    if scored == 0:
        nan = float("nan")
        return CoverageSummary(name, nan, nan, nan, nan, 0, estimand, failures=failures, mean_point=mean_point)

    below = int(np.count_nonzero(highs < estimand))
    above = int(np.count_nonzero(lows > estimand))
    covered = scored - below - above
    return CoverageSummary(
        estimator=name,
        below=below / scored,
        covered=covered / scored,
        above=above / scored,
        mean_half_width=float(np.mean(0.5 * (highs - lows))),
        replicates=scored,
        estimand=estimand,
        failures=failures,
        mean_point=mean_point,
    )


def coverage_experiment(
    plan: ExperimentPlan,
    runner: Optional[ReplicateRunner] = None,
    estimand: Optional[float] = None,
    logger: Optional[LoggerType] = None,
) -> Dict[str, CoverageSummary]:
    """
    Coverage of every estimator of a plan.

    Args:
        plan: Experiment plan
        runner: Replicate runner, a default one when omitted
        estimand: Precomputed estimand; computed once from the plan when omitted
        logger: Logger for status messages

    Returns:
        dict: Estimator name to CoverageSummary, in plan order
    """
    if logger is None:
        logger = get_logger(name="experiments")
    runner = runner or ReplicateRunner(logger=logger)

    if estimand is None:
        estimand = monte_carlo_estimand(plan, runner=runner, logger=logger)

    seeds = spawn_seeds(plan.seed, plan.replicates, stream=1)
    tasks = [(plan, replicate_id, seed) for replicate_id, seed in enumerate(seeds)]
    outcomes = sorted(runner.map(_replicate_task, tasks, desc="Trials"), key=lambda o: o.replicate_id)

    summaries = {}
    for name in plan.estimators:
        # regression_base estimates the per-agent arm difference
        target = estimand * plan.treated_fraction if name is EstimatorName.REGRESSION_BASE else estimand
        summary = summarize(name.value, outcomes, target)
        if summary.failures:
            logger.warning(f"[!] {name.value}: {summary.failures} of {plan.replicates} replicates failed numerically")
        logger.info(
            f"[+] {name.value}: covered {summary.covered:.3f}, mean half-width {summary.mean_half_width:.4f}"
        )
        summaries[name.value] = summary
    return summaries


def sweep(
    plan: ExperimentPlan,
    runner: Optional[ReplicateRunner] = None,
    logger: Optional[LoggerType] = None,
) -> List[Tuple[float, Dict[str, CoverageSummary]]]:
    """
    Coverage experiment per value of the plan's sweep grid.

    A level sweep shares one estimand, since the level does not change it.

    Returns:
        list: (grid value, estimator name to CoverageSummary) in grid order
    """
    if logger is None:
        logger = get_logger(name="experiments")
    if plan.sweep_axis is None:
        raise ConfigurationError("the plan has no sweep axis")
    runner = runner or ReplicateRunner(logger=logger)

    shared_estimand = None
    if plan.sweep_axis == "level":
        shared_estimand = monte_carlo_estimand(plan, runner=runner, logger=logger)

    results = []
    for value in plan.sweep_values:
        logger.info(f"[+] Sweep {plan.sweep_axis} = {value}")
        point = plan.with_value(plan.sweep_axis, value)
        summaries = coverage_experiment(point, runner=runner, estimand=shared_estimand, logger=logger)
        tagged = {
            name: replace(summary, sweep_axis=plan.sweep_axis, sweep_value=float(value))
            for name, summary in summaries.items()
        }
        results.append((float(value), tagged))
    return results
