"""
Index Policy Evaluation Toolkit

Module: threshold.py

Estimators built on the boundary index lambda, the largest index among the
treated policy-arm agents:

    threshold:       mean over treated - mean over control agents with index <= lambda
    mate_reshuffle:  fills the rewards of unselected agents with their pooled
                     mean r and compares the arms, unrescaled and without a CI

Both require single-round allocation.
"""

from typing import Optional, Tuple

import numpy as np

from src.core.errors import ArgumentError, DegenerateDataError
from src.core.types import EstimateReport, EstimatorName, RctDataset, check_truncation
from src.policies.allocation import threshold_select


def _require_single_round(data: RctDataset, estimator: str) -> None:
    if data.rounds != 1:
        raise ArgumentError(f"the {estimator} estimator needs single-round allocation, got {data.rounds} rounds")


def boundary_index(data: RctDataset) -> float:
    """Largest index among treated policy-arm agents."""
    treated = data.policy_arm.treat_weeks >= 1
    return float(data.policy_arm.indices[treated].max())


def threshold_groups(data: RctDataset, truncate_at: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Rewards of the treated policy-arm agents and of the control threshold set.

    Returns:
        tuple: (treated_rewards, control_rewards)

    Raises:
        ArgumentError: If the dataset has more than one round
        DegenerateDataError: If no control agent has an index <= lambda
    """
    _require_single_round(data, "threshold")
    policy, control = data.policy_arm, data.control_arm
    lam = boundary_index(data)

    selected = threshold_select(control.indices, lam, agent_ids=control.agent_ids)
    if selected.shape[0] == 0:
        raise DegenerateDataError(f"no control agent has an index at or below the boundary {lam:.6g}")
    in_set = np.isin(control.agent_ids, selected)

    treated_rewards = policy.totals(truncate_at)[policy.treat_weeks >= 1]
    return treated_rewards, control.totals(truncate_at)[in_set]


def estimate_threshold(data: RctDataset, truncate_at: Optional[int] = None) -> EstimateReport:
    """
    Threshold estimator: treated mean minus the control threshold-set mean.

    Args:
        data: Single-round trial dataset
        truncate_at: Optional number of leading timesteps summed

    Returns:
        EstimateReport: Point-only report

    Raises:
        DegenerateDataError: If the control threshold set is empty
    """
    keep = check_truncation(truncate_at, data.horizon)
    treated, control = threshold_groups(data, keep)
    return EstimateReport(
        estimator=EstimatorName.THRESHOLD,
        point=float(treated.mean() - control.mean()),
        n=data.n,
        alpha=data.alpha,
        horizon=keep,
    )


def estimate_mate_reshuffle(data: RctDataset, truncate_at: Optional[int] = None) -> float:
    """
    Reshuffled-fill estimator.

    N^c holds the control agents with index above lambda and N^p the untreated
    policy-arm agents. Their rewards are replaced by the pooled mean r:

        (1/n) * (sum_{policy \\ N^p} R + (|N^p| - |N^c|) * r - sum_{control \\ N^c} R)

    Args:
        data: Single-round trial dataset
        truncate_at: Optional number of leading timesteps summed

    Returns:
        float: Point estimate, not rescaled by n / budget

    Raises:
        DegenerateDataError: If N^c and N^p are both empty
    """
    _require_single_round(data, "mate_reshuffle")
    policy, control = data.policy_arm, data.control_arm
    lam = boundary_index(data)
    policy_totals = policy.totals(truncate_at)
    control_totals = control.totals(truncate_at)

    untreated_policy = policy.treat_weeks == 0
    above_control = control.indices > lam
    filled = np.concatenate([policy_totals[untreated_policy], control_totals[above_control]])
    if filled.shape[0] == 0:
        raise DegenerateDataError("no agent is left to reshuffle; N^c and N^p are both empty")
    r = filled.mean()

    n_p = int(np.count_nonzero(untreated_policy))
    n_c = int(np.count_nonzero(above_control))
    total = policy_totals[~untreated_policy].sum() + (n_p - n_c) * r - control_totals[~above_control].sum()
    return float(total / data.n)
