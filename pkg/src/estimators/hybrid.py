"""
Index Policy Evaluation Toolkit

Module: hybrid.py

Affine combination of the subgroup and base estimators,
(1 - w) * subgroup + w * base. With weight "auto" the weight minimising the
estimated asymptotic variance is used.
"""

from typing import Optional, Union

from src.core.errors import ArgumentError
from src.core.types import EstimateReport, EstimatorName, RctDataset, check_truncation
from src.estimators.difference import estimate_base, estimate_subgroup

AUTO = "auto"


def estimate_hybrid(
    data: RctDataset,
    weight: Union[float, str] = AUTO,
    k: Optional[int] = None,
    truncate_at: Optional[int] = None,
) -> EstimateReport:
    """
    Hybrid point estimate.

    Args:
        data: Single-round trial dataset
        weight: Weight on the base estimator, or "auto" for the estimated optimum
        k: Order-statistic window of the weight estimate, automatic when omitted
        truncate_at: Optional number of leading timesteps summed

    Returns:
        EstimateReport: Point-only report carrying the weight used

    Raises:
        ArgumentError: If the dataset has more than one round or weight is invalid
        DegenerateVarianceError: If the auto weight's curvature term is not positive
    """
    if data.rounds != 1:
        raise ArgumentError(f"the hybrid estimator needs single-round allocation, got {data.rounds} rounds")
    keep = check_truncation(truncate_at, data.horizon)

    if weight == AUTO:
        from src.inference.hybrid import hybrid_optimal_weight
        w = hybrid_optimal_weight(data, k=k, truncate_at=keep).w_star
    elif isinstance(weight, str):
        raise ArgumentError(f"weight must be a number or 'auto', got '{weight}'")
    else:
        w = float(weight)

    subgroup = estimate_subgroup(data, truncate_at=keep).point
    base = estimate_base(data, truncate_at=keep).point
    return EstimateReport(
        estimator=EstimatorName.HYBRID,
        point=(1.0 - w) * subgroup + w * base,
        n=data.n,
        alpha=data.alpha,
        hybrid_weight=w,
        horizon=keep,
    )
