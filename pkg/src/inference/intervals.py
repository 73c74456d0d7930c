"""
Index Policy Evaluation Toolkit

Module: intervals.py

Normal-approximation intervals and tests built from an estimate theta and
an estimated asymptotic variance sigma^2 of sqrt(n) * theta:

    interval:    theta -/+ Z_{1 - beta/2} * sqrt(sigma^2 / n)
    p-value:     1 - Phi(sqrt(n) * theta / sigma)       (H0: effect <= 0)
    comparison:  (theta_1 - theta_2) -/+ Z * sqrt((sigma_1^2 + sigma_2^2) / n)
"""

import math
from typing import Optional, Tuple

from src.core.errors import ArgumentError, DegenerateVarianceError
from src.core.types import EstimateReport, EstimatorName, RctDataset
from src.estimators.difference import estimate_base, estimate_subgroup
from src.inference.normal import normal_sf, two_sided_critical_value
from src.inference.variance import welch_base_variance, welch_subgroup_variance

Interval = Tuple[float, float]


def confidence_interval(point: float, sigma2: float, n: int, level: float = 0.95) -> Interval:
    """
    Symmetric z-interval around a point estimate.

    Args:
        point: Point estimate
        sigma2: Asymptotic variance estimate, non-negative
        n: Agents per arm
        level: Confidence level in (0, 1)

    Returns:
        tuple: (low, high)

    Raises:
        ArgumentError: If sigma2 is negative, n < 1 or level is outside (0, 1)
    """
    if sigma2 < 0.0:
        raise ArgumentError(f"sigma2 must be non-negative, got {sigma2}")
    if n < 1:
        raise ArgumentError(f"n must be positive, got {n}")
    half_width = two_sided_critical_value(level) * math.sqrt(sigma2 / n)
    return point - half_width, point + half_width


def p_value_positive_effect(point: float, sigma2: float, n: int) -> float:
    """
    One-sided p-value for H0: effect <= 0.

    Raises:
        DegenerateVarianceError: If sigma2 is not positive
    """
    if not sigma2 > 0.0:
        raise DegenerateVarianceError(f"a p-value needs a positive variance, got {sigma2}")
    return float(normal_sf(math.sqrt(n) * point / math.sqrt(sigma2)))


def compare_policies(report1: EstimateReport, report2: EstimateReport, level: float = 0.95) -> Interval:
    """
    Interval for the difference of two policies evaluated in independent trials.

    Args:
        report1: Report of the first policy
        report2: Report of the second policy
        level: Confidence level

    Returns:
        tuple: (low, high) around point1 - point2

    Raises:
        ArgumentError: If a report has no variance or the arm sizes differ
    """
    if report1.variance is None or report2.variance is None:
        raise ArgumentError("both reports need a variance estimate to be compared")
    if report1.n != report2.n:
        raise ArgumentError(f"reports have different arm sizes ({report1.n} vs {report2.n})")
    return confidence_interval(report1.point - report2.point, report1.variance + report2.variance, report1.n, level)


def welch_interval(
    data: RctDataset,
    level: float = 0.95,
    estimator: EstimatorName = EstimatorName.SUBGROUP,
    upto_round: Optional[int] = None,
    truncate_at: Optional[int] = None,
) -> Interval:
    """
    Two-sample z-interval for the subgroup or base estimator.

    For a single-round subgroup estimate this is the three-term interval with
    its negative third term dropped, so it is never narrower.

    Raises:
        ArgumentError: If the estimator is neither subgroup nor base
        DegenerateDataError: If a group holds fewer than 2 agents
    """
    estimator = EstimatorName(estimator)
    if estimator is EstimatorName.SUBGROUP:
        point = estimate_subgroup(data, upto_round, truncate_at).point
        variance = welch_subgroup_variance(data, upto_round, truncate_at)
    elif estimator is EstimatorName.BASE:
        point = estimate_base(data, truncate_at).point
        variance = welch_base_variance(data, truncate_at)
    else:
        raise ArgumentError(f"welch intervals cover the subgroup and base estimators, not '{estimator.value}'")
    return confidence_interval(point, variance.value, data.n, level)
