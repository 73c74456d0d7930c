"""
Index Policy Evaluation Toolkit

Module: whittle.py

Whittle index for two-state, two-action restless agents.

For a candidate subsidy lambda the passive action earns lambda on top of the
reward, where the reward of taking action a in state s is the probability
T^a_{s,1} of being in the good state after the transition (the same timing
the simulator records). The discounted MDP is solved exactly for every
subsidy: with two states there are four deterministic stationary policies,
each evaluated by a batched 2x2 linear solve, and the optimal value function
is their elementwise maximum. The index is the subsidy at which the active
and passive Q-values of the evaluation state coincide, found by bisection.

The returned index is the negated subsidy, so the agents most worth treating
carry the lowest index.
"""

import numpy as np

from src.core.errors import ArgumentError, ConvergenceError
from src.core.types import Agent
from src.utils.logger import get_logger

logger = get_logger(__name__)

# Deterministic stationary policies as (action in state 0, action in state 1)
_POLICIES = ((0, 0), (0, 1), (1, 0), (1, 1))

MAX_BISECTION_STEPS = 200


def _as_stack(transitions: np.ndarray) -> np.ndarray:
    return np.asarray(transitions, dtype=float).reshape(-1, 2, 2, 2)


def optimal_values(transitions: np.ndarray, subsidy: np.ndarray, discount: float) -> np.ndarray:
    """
    Optimal discounted values of every agent under its own subsidy.

    Args:
        transitions: Stack (m, 2, 2, 2) indexed [agent, action, from_state, to_state]
        subsidy: Subsidy per agent, shape (m,)
        discount: Discount factor in (0, 1)

    Returns:
        np.ndarray: Values of shape (m, 2)
    """
    transitions = _as_stack(transitions)
    m = transitions.shape[0]
    subsidy = np.broadcast_to(np.asarray(subsidy, dtype=float), (m,))
    states = np.arange(2)
    identity = np.eye(2)

    best = np.full((m, 2), -np.inf)
    for policy in _POLICIES:
        actions = np.array(policy)
        chain = transitions[:, actions, states, :]
        reward = chain[:, :, 1] + subsidy[:, None] * (actions == 0)
        values = np.linalg.solve(identity - discount * chain, reward[:, :, None])[:, :, 0]
        best = np.maximum(best, values)
    return best


def q_value_gap(transitions: np.ndarray, subsidy: np.ndarray, discount: float, state: int = 0) -> np.ndarray:
    """
    Active minus passive Q-value at the evaluation state.

    Args:
        transitions: Stack (m, 2, 2, 2)
        subsidy: Subsidy per agent
        discount: Discount factor in (0, 1)
        state: Evaluation state

    Returns:
        np.ndarray: Gap per agent; positive when acting is strictly better
    """
    transitions = _as_stack(transitions)
    m = transitions.shape[0]
    subsidy = np.broadcast_to(np.asarray(subsidy, dtype=float), (m,))
    values = optimal_values(transitions, subsidy, discount)

    # Landing in the good state pays 1 on top of the discounted continuation
    next_value = np.column_stack([discount * values[:, 0], 1.0 + discount * values[:, 1]])
    q_passive = np.einsum("mj,mj->m", transitions[:, 0, state, :], next_value) + subsidy
    q_active = np.einsum("mj,mj->m", transitions[:, 1, state, :], next_value)
    return q_active - q_passive


def whittle_indices(
    transitions: np.ndarray,
    discount: float = 0.9,
    state: int = 0,
    tol: float = 1e-6,
    max_steps: int = MAX_BISECTION_STEPS,
) -> np.ndarray:
    """
    Negated Whittle subsidies of a stack of agents, by vectorised bisection.

    Args:
        transitions: Stack (m, 2, 2, 2)
        discount: Discount factor in (0, 1)
        state: Evaluation state
        tol: Width of the final bisection bracket
        max_steps: Bound on bisection steps

    Returns:
        np.ndarray: Index per agent

    Raises:
        ConvergenceError: If the subsidy bracket does not contain a root or
            bisection needs more than max_steps steps
    """
    transitions = _as_stack(transitions)
    m = transitions.shape[0]
    if m == 0:
        return np.zeros(0)

    # |gap + subsidy| <= 1 / (1 - discount), so this bracket always straddles the root
    bound = 1.0 / (1.0 - discount) + 1.0
    low = np.full(m, -bound)
    high = np.full(m, bound)
    if np.any(q_value_gap(transitions, low, discount, state) < 0.0) or np.any(
        q_value_gap(transitions, high, discount, state) > 0.0
    ):
        logger.error("[X] Whittle subsidy bracket does not contain a root")
        raise ConvergenceError("Whittle subsidy bracket does not contain a root")

    steps = 0
    while np.any(high - low > tol):
        if steps >= max_steps:
            logger.error(f"[X] Whittle bisection did not reach tol={tol} in {max_steps} steps")
            raise ConvergenceError(f"Whittle bisection did not converge in {max_steps} steps")
        middle = 0.5 * (low + high)
        act = q_value_gap(transitions, middle, discount, state) > 0.0
        low = np.where(act, middle, low)
        high = np.where(act, high, middle)
        steps += 1

    return -0.5 * (low + high)


def whittle_index(agent: Agent, discount: float = 0.9, tol: float = 1e-6, state: int = 0) -> float:
    """
    Negated Whittle subsidy of a single agent.

    Args:
        agent: Agent with transitions
        discount: Discount factor in (0, 1)
        tol: Bisection tolerance
        state: Evaluation state

    Returns:
        float: The agent's index
    """
    if agent.transitions is None:
        raise ArgumentError(f"agent {agent.id} has no transition model")
    return float(whittle_indices(agent.transitions.probs, discount=discount, state=state, tol=tol)[0])
