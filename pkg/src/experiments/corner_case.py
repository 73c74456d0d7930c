"""
Index Policy Evaluation Toolkit

Module: corner_case.py

Replicated corner-case trials comparing the base, subgroup and auto-weighted
hybrid estimators, all with plug-in variances. Because the treatment effect
is exactly 1 for every agent, each estimator's mean, spread, interval width
and coverage can be reported against the known estimand.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.core.errors import NumericalError
from src.core.types import EstimatorName, IndexKind, PolicySpec
from src.experiments.runner import ReplicateRunner, spawn_seeds
from src.inference.normal import two_sided_critical_value
from src.inference.reporting import InferenceSettings, evaluate_estimator
from src.simulators.config import BoostCenter
from src.simulators.corner_case import corner_case_cohort
from src.simulators.rct import run_rct
from src.utils.logger import LoggerType, get_logger


CORNER_ESTIMATORS = (EstimatorName.BASE, EstimatorName.SUBGROUP, EstimatorName.HYBRID)
ESTIMAND = 1.0


@dataclass(frozen=True)
class CornerCaseSettings:
    n: int
    alpha: float
    sigma: float
    center: BoostCenter
    inference: InferenceSettings


@dataclass(frozen=True)
class CornerCaseResult:
    """
    Replicate statistics of one estimator.

    Attributes:
        estimator (str): Estimator name
        mean_point (float): Mean point estimate
        std_point (float): Empirical standard deviation of the point estimate
        mean_ci_width (float): Mean full interval width
        coverage (float): Fraction of intervals containing 1
        oracle_width (float): 2 * z * std_point, the width a perfect variance estimate gives
        replicates (int): Replicates that produced an estimate
        failures (int): Replicates skipped after a numerical failure
    """
    estimator: str
    mean_point: float
    std_point: float
    mean_ci_width: float
    coverage: float
    oracle_width: float
    replicates: int
    failures: int = 0

    def to_row(self) -> Dict[str, Any]:
        return {
            "estimator": self.estimator,
            "mean_point": self.mean_point,
            "std_point": self.std_point,
            "mean_ci_width": self.mean_ci_width,
            "coverage": self.coverage,
            "oracle_width": self.oracle_width,
            "replicates": self.replicates,
            "failures": self.failures,
        }


def _corner_task(args: Tuple[CornerCaseSettings, np.random.SeedSequence]) -> Dict[str, Optional[Tuple[float, float, float]]]:
    settings, seed = args
    rng = np.random.default_rng(seed)
    cohort, _ = corner_case_cohort(2 * settings.n, settings.alpha, settings.sigma, rng, center=settings.center)
    cohort_p, cohort_c = cohort.split(settings.n)
    spec = PolicySpec(index_kind=IndexKind.CUSTOM_COLUMN, alpha=settings.alpha)
    data = run_rct(cohort_p, cohort_c, spec, horizon=1, rng=rng)

    results: Dict[str, Optional[Tuple[float, float, float]]] = {}
    for name in CORNER_ESTIMATORS:
        try:
            report = evaluate_estimator(data, name, settings.inference)
        except NumericalError:
            results[name.value] = None
            continue
        results[name.value] = (report.point, report.ci_low, report.ci_high)
    return results


def _summarize(name: str, outcomes: List[Dict[str, Any]], z: float) -> CornerCaseResult:
    rows = [o[name] for o in outcomes if o[name] is not None]
    failures = len(outcomes) - len(rows)
    if not rows:
        nan = float("nan")
        return CornerCaseResult(name, nan, nan, nan, nan, nan, 0, failures)
    values = np.array(rows, dtype=float)
    points, lows, highs = values[:, 0], values[:, 1], values[:, 2]
    std = float(np.std(points, ddof=1)) if len(rows) > 1 else 0.0
    return CornerCaseResult(
        estimator=name,
        mean_point=float(points.mean()),
        std_point=std,
        mean_ci_width=float(np.mean(highs - lows)),
        coverage=float(np.mean((lows <= ESTIMAND) & (ESTIMAND <= highs))),
        oracle_width=2.0 * z * std,
        replicates=len(rows),
        failures=failures,
    )


def corner_case_study(
    n: int = 500,
    alpha: float = 0.5,
    sigma: float = 0.05,
    replicates: int = 10000,
    level: float = 0.95,
    seed: int = 0,
    center: BoostCenter = BoostCenter.ALPHA,
    k: Optional[int] = None,
    runner: Optional[ReplicateRunner] = None,
    logger: Optional[LoggerType] = None,
) -> Dict[str, CornerCaseResult]:
    """
    Replicated corner-case trials.

    Args:
        n: Agents per arm
        alpha: Treatment fraction
        sigma: Bandwidth of the reward boost
        replicates: Number of trials
        level: Confidence level
        seed: Root seed
        center: Boost centre rule
        k: Order-statistic window of the plug-in variances, automatic when None
        runner: Replicate runner, a default one when omitted
        logger: Logger for status messages

    Returns:
        dict: Estimator name to CornerCaseResult for base, subgroup and hybrid
    """
    if logger is None:
        logger = get_logger(name="experiments")
    runner = runner or ReplicateRunner(logger=logger)
    settings = CornerCaseSettings(
        n=n,
        alpha=alpha,
        sigma=sigma,
        center=BoostCenter(center),
        inference=InferenceSettings(level=level, subgroup_variance="sg_knn", base_variance="base_knn", k=k),
    )
    logger.info(f"[+] Corner case: n={n}, alpha={alpha}, sigma={sigma}, {replicates} replicates")

    seeds = spawn_seeds(seed, replicates, stream=1)
    outcomes = runner.map(_corner_task, [(settings, s) for s in seeds], desc="Corner case")
    z = two_sided_critical_value(level)

    results = {}
    for name in CORNER_ESTIMATORS:
        result = _summarize(name.value, outcomes, z)
        if result.failures:
            logger.warning(f"[!] {name.value}: {result.failures} of {replicates} replicates failed numerically")
        logger.info(f"[+] {name.value}: std {result.std_point:.4f}, mean CI width {result.mean_ci_width:.4f}")
        results[name.value] = result
    return results
