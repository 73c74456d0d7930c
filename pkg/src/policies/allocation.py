"""
Index Policy Evaluation Toolkit

Module: allocation.py

Allocation rules for index-based policies: single-round top-k selection of
the lowest-index agents, sequential allocation over several rounds without
replacement, and threshold selection of every agent at or below a given
index value.

Ties are broken by (index, agent_id) in lexicographic order, so allocation is
deterministic for any input.
"""

from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

import numpy as np

from src.core.errors import ArgumentError
from src.core.types import budget_per_round


@dataclass(frozen=True, eq=False)
class AllocationResult:
    """
    Outcome of one or more allocation rounds.

    Attributes:
        selected (tuple): One array of agent ids per round, in allocation order
        boundary_index (tuple): Largest index among the agents selected in each round
    """
    selected: Tuple[np.ndarray, ...]
    boundary_index: Tuple[float, ...]

    @property
    def rounds(self) -> int:
        return len(self.selected)

    def all_selected(self) -> np.ndarray:
        if not self.selected:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate(self.selected)

    def treat_weeks(self, agent_ids: np.ndarray) -> np.ndarray:
        """
        Treatment round per agent, 0 for agents never selected.

        Args:
            agent_ids: Ids of the arm, in storage order

        Returns:
            np.ndarray: Integer treat_week per agent
        """
        agent_ids = np.asarray(agent_ids, dtype=np.int64)
        weeks = np.zeros(agent_ids.shape[0], dtype=np.int64)
        position = {int(agent_id): i for i, agent_id in enumerate(agent_ids)}
        for round_number, ids in enumerate(self.selected, start=1):
            weeks[[position[int(i)] for i in ids]] = round_number
        return weeks


def _resolve_ids(indices: np.ndarray, agent_ids: Optional[np.ndarray]) -> np.ndarray:
    if agent_ids is None:
        return np.arange(indices.shape[0], dtype=np.int64)
    agent_ids = np.asarray(agent_ids, dtype=np.int64)
    if agent_ids.shape != indices.shape:
        raise ArgumentError("agent_ids must have one entry per index")
    return agent_ids


def allocate(
    indices: np.ndarray,
    alpha: float,
    already_treated: Optional[Iterable[int]] = None,
    agent_ids: Optional[np.ndarray] = None,
) -> AllocationResult:
    """
    Select the ceil(alpha * n) lowest-index agents that are not yet treated.

    Args:
        indices: Index value per agent
        alpha: Fraction of the arm treated in this round
        already_treated: Ids excluded from selection
        agent_ids: Id per agent; positions 0..n-1 when omitted

    Returns:
        AllocationResult: A single-round result

    Raises:
        ArgumentError: If fewer than ceil(alpha * n) agents are untreated
    """
    indices = np.asarray(indices, dtype=float)
    ids = _resolve_ids(indices, agent_ids)
    k = budget_per_round(alpha, indices.shape[0])

    treated = np.zeros(ids.shape[0], dtype=bool)
    if already_treated is not None:
        treated = np.isin(ids, np.fromiter(already_treated, dtype=np.int64))
    available = int(np.count_nonzero(~treated))
    if available < k:
        raise ArgumentError(f"cannot select {k} agents, only {available} remain untreated")

    order = np.lexsort((ids, indices))
    order = order[~treated[order]][:k]
    boundary = float(indices[order].max()) if k > 0 else float("-inf")
    return AllocationResult(selected=(ids[order],), boundary_index=(boundary,))


def allocate_rounds(
    indices: np.ndarray,
    alpha: float,
    rounds: int,
    agent_ids: Optional[np.ndarray] = None,
) -> AllocationResult:
    """
    Sequential allocation: each round treats the lowest-index untreated agents.

    Args:
        indices: Index value per agent (static across rounds)
        alpha: Per-round treatment fraction
        rounds: Number of rounds
        agent_ids: Id per agent; positions 0..n-1 when omitted

    Returns:
        AllocationResult: One selection per round, pairwise disjoint
    """
    indices = np.asarray(indices, dtype=float)
    ids = _resolve_ids(indices, agent_ids)
    selected, boundaries = [], []
    treated = set()
    for _ in range(rounds):
        result = allocate(indices, alpha, already_treated=treated, agent_ids=ids)
        selected.append(result.selected[0])
        boundaries.append(result.boundary_index[0])
        treated.update(int(i) for i in result.selected[0])
    return AllocationResult(selected=tuple(selected), boundary_index=tuple(boundaries))


def threshold_select(
    indices: np.ndarray,
    lam: float,
    agent_ids: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Ids of all agents whose index is at most lam, in ascending id order.

    Args:
        indices: Index value per agent
        lam: Threshold (ties included)
        agent_ids: Id per agent; positions 0..n-1 when omitted

    Returns:
        np.ndarray: Selected ids
    """
    indices = np.asarray(indices, dtype=float)
    ids = _resolve_ids(indices, agent_ids)
    return np.sort(ids[indices <= lam])
