"""
Index Policy Evaluation Toolkit

Module: difference.py

Difference-in-sums estimators of the per-treatment effect:

    base:      (1 / budget) * (sum over policy arm - sum over control arm)
    subgroup:  (1 / budget) * (sum over treated - sum over counterfactual)

The base estimator compares whole arms and rescales by n / budget, the
subgroup estimator only compares the agents the policy selects in each arm.
Both return point-only reports; variances are attached by the inference
package.
"""

from typing import Optional

from src.core.types import EstimateReport, EstimatorName, RctDataset, check_truncation
from src.estimators.views import build_subgroup_view


def estimate_base(data: RctDataset, truncate_at: Optional[int] = None) -> EstimateReport:
    """
    Rescaled difference of arm totals.

    Args:
        data: Trial dataset
        truncate_at: Optional number of leading timesteps summed

    Returns:
        EstimateReport: Point-only report
    """
    keep = check_truncation(truncate_at, data.horizon)
    difference = data.policy_arm.totals(keep).sum() - data.control_arm.totals(keep).sum()
    return EstimateReport(
        estimator=EstimatorName.BASE,
        point=float(difference / data.budget()),
        n=data.n,
        alpha=data.alpha,
        horizon=keep,
    )


def estimate_subgroup(
    data: RctDataset,
    upto_round: Optional[int] = None,
    truncate_at: Optional[int] = None,
) -> EstimateReport:
    """
    Difference between treated and counterfactually selected agents.

    Args:
        data: Trial dataset
        upto_round: Only agents selected in rounds 1..upto_round, all rounds when omitted
        truncate_at: Optional number of leading timesteps summed

    Returns:
        EstimateReport: Point-only report
    """
    keep = check_truncation(truncate_at, data.horizon)
    view = build_subgroup_view(data, upto_round, keep)
    return EstimateReport(
        estimator=EstimatorName.SUBGROUP,
        point=(view.treated_sum - view.counterfactual_sum) / view.budget,
        n=data.n,
        alpha=data.alpha,
        horizon=keep,
    )
