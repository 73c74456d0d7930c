"""
Index Policy Evaluation Toolkit

Module: views.py

The subgroup view of a trial: the policy-arm agents that were treated and
the control-arm agents the policy would have treated had it been applied to
the control arm. The counterfactual selection re-runs the allocation rule on
the control indices, round by round and without replacement.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.core.errors import ArgumentError, DataInvariantError
from src.core.types import RctDataset
from src.policies.allocation import allocate_rounds


@dataclass(frozen=True, eq=False)
class SubgroupView:
    """
    Rewards of the treated and the counterfactually selected agents.

    Both reward vectors are ordered by (index, agent_id), the allocation
    order, which the order-statistic variance estimators rely on.

    Attributes:
        treated_rewards (np.ndarray): Total rewards of treated policy-arm agents
        counterfactual_rewards (np.ndarray): Total rewards of control-arm agents
            the policy would have selected
        budget (int): Treatments in the view, upto_round * ceil(alpha * n)
        treated_mask (np.ndarray): Policy-arm membership, in storage order
        counterfactual_mask (np.ndarray): Control-arm membership, in storage order
        upto_round (int): Last allocation round included
    """
    treated_rewards: np.ndarray
    counterfactual_rewards: np.ndarray
    budget: int
    treated_mask: np.ndarray
    counterfactual_mask: np.ndarray
    upto_round: int = 1

    def __post_init__(self):
        if self.treated_rewards.shape[0] != self.budget or self.counterfactual_rewards.shape[0] != self.budget:
            raise DataInvariantError(
                "subgroup_size",
                f"subgroups hold {self.treated_rewards.shape[0]} and {self.counterfactual_rewards.shape[0]} "
                f"agents, expected {self.budget}",
            )

    @property
    def treated_sum(self) -> float:
        return float(self.treated_rewards.sum())

    @property
    def counterfactual_sum(self) -> float:
        return float(self.counterfactual_rewards.sum())


def resolve_upto_round(data: RctDataset, upto_round: Optional[int]) -> int:
    """
    Raises:
        ArgumentError: If upto_round is outside [1, rounds]
    """
    if upto_round is None:
        return data.rounds
    if not 1 <= upto_round <= data.rounds:
        raise ArgumentError(f"upto_round must lie in [1, {data.rounds}], got {upto_round}")
    return int(upto_round)


def _allocation_order(indices: np.ndarray, agent_ids: np.ndarray, mask: np.ndarray) -> np.ndarray:
    order = np.lexsort((agent_ids, indices))
    return order[mask[order]]


def build_subgroup_view(
    data: RctDataset,
    upto_round: Optional[int] = None,
    truncate_at: Optional[int] = None,
) -> SubgroupView:
    """
    Treated and counterfactual subgroups over the first upto_round rounds.

    Args:
        data: Trial dataset
        upto_round: Last round included, all rounds when omitted
        truncate_at: Optional number of leading timesteps summed

    Returns:
        SubgroupView: The two subgroups in allocation order

    Raises:
        ArgumentError: If upto_round or truncate_at is out of range
    """
    upto = resolve_upto_round(data, upto_round)
    policy, control = data.policy_arm, data.control_arm

    weeks = policy.treat_weeks
    treated_mask = (weeks >= 1) & (weeks <= upto)

    selected = allocate_rounds(control.indices, data.alpha, upto, agent_ids=control.agent_ids).all_selected()
    counterfactual_mask = np.isin(control.agent_ids, selected)

    treated_order = _allocation_order(policy.indices, policy.agent_ids, treated_mask)
    counterfactual_order = _allocation_order(control.indices, control.agent_ids, counterfactual_mask)

    return SubgroupView(
        treated_rewards=policy.totals(truncate_at)[treated_order],
        counterfactual_rewards=control.totals(truncate_at)[counterfactual_order],
        budget=data.budget(upto),
        treated_mask=treated_mask,
        counterfactual_mask=counterfactual_mask,
        upto_round=upto,
    )
