"""
Index Policy Evaluation Toolkit

Module: markov_chain.py

Two-state reward chains. Agents move between the bad (0) and good (1) state
with their passive transitions, except at the single timestep equal to their
treat_week, where the active transitions apply. Entry t of a reward path is
1 iff the agent is in the good state after the transition of step t + 1, so
a round-1 treatment affects the first recorded reward.

The sampling functions draw whole stacks of agents at once; expected_rewards
is the exact oracle, propagating state distributions instead of sampling.
"""

from typing import Union

import numpy as np

from src.core.errors import ArgumentError
from src.core.types import Agent
from src.simulators.config import InitialState


def initial_distribution(transitions: np.ndarray, rule: Union[InitialState, str]) -> np.ndarray:
    """
    Start-state distribution of every agent.

    The stationary rule uses the passive chain's stationary law
    pi_good = p01 / (p01 + p10); chains that never switch start uniformly.

    Args:
        transitions: Stack (m, 2, 2, 2)
        rule: Start-state rule

    Returns:
        np.ndarray: Probabilities (m, 2) of starting bad and good
    """
    rule = InitialState(rule)
    m = transitions.shape[0]
    if rule is InitialState.FIXED_GOOD:
        good = np.ones(m)
    elif rule is InitialState.FIXED_BAD:
        good = np.zeros(m)
    else:
        up = transitions[:, 0, 0, 1]
        down = transitions[:, 0, 1, 0]
        switching = up + down
        good = np.divide(up, switching, out=np.full(m, 0.5), where=switching > 0.0)
    return np.column_stack([1.0 - good, good])


def _check_weeks(treat_weeks: np.ndarray, horizon: int) -> np.ndarray:
    treat_weeks = np.asarray(treat_weeks, dtype=np.int64)
    if horizon < 1:
        raise ArgumentError("horizon must be at least 1")
    if np.any(treat_weeks < 0) or np.any(treat_weeks > horizon):
        raise ArgumentError(f"treat_week must lie in [0, {horizon}]")
    return treat_weeks


def simulate_reward_paths(
    transitions: np.ndarray,
    treat_weeks: np.ndarray,
    horizon: int,
    rng: np.random.Generator,
    initial_state: Union[InitialState, str] = InitialState.STATIONARY,
) -> np.ndarray:
    """
    Sample 0/1 reward paths for a stack of agents.

    Args:
        transitions: Stack (m, 2, 2, 2)
        treat_weeks: Treatment step per agent, 0 for never
        horizon: Number of steps
        rng: Random generator
        initial_state: Start-state rule

    Returns:
        np.ndarray: Matrix (m, horizon) of good-state indicators
    """
    transitions = np.asarray(transitions, dtype=float).reshape(-1, 2, 2, 2)
    treat_weeks = _check_weeks(np.broadcast_to(treat_weeks, transitions.shape[:1]), horizon)
    m = transitions.shape[0]
    rows = np.arange(m)

    start = initial_distribution(transitions, initial_state)
    states = (rng.random(m) < start[:, 1]).astype(np.int64)
    paths = np.empty((m, horizon))
    for step in range(1, horizon + 1):
        actions = (treat_weeks == step).astype(np.int64)
        good = transitions[rows, actions, states, 1]
        states = (rng.random(m) < good).astype(np.int64)
        paths[:, step - 1] = states
    return paths


def expected_rewards(
    transitions: np.ndarray,
    treat_weeks: np.ndarray,
    horizon: int,
    initial_state: Union[InitialState, str] = InitialState.STATIONARY,
) -> np.ndarray:
    """
    Exact expected total reward of each agent.

    Args:
        transitions: Stack (m, 2, 2, 2)
        treat_weeks: Treatment step per agent, 0 for never
        horizon: Number of steps
        initial_state: Start-state rule

    Returns:
        np.ndarray: Expected sum of the reward path per agent
    """
    transitions = np.asarray(transitions, dtype=float).reshape(-1, 2, 2, 2)
    treat_weeks = _check_weeks(np.broadcast_to(treat_weeks, transitions.shape[:1]), horizon)
    rows = np.arange(transitions.shape[0])

    distribution = initial_distribution(transitions, initial_state)
    total = np.zeros(transitions.shape[0])
    for step in range(1, horizon + 1):
        actions = (treat_weeks == step).astype(np.int64)
        distribution = np.einsum("ms,mst->mt", distribution, transitions[rows, actions])
        total += distribution[:, 1]
    return total


def simulate_reward_path(
    agent: Agent,
    treat_week: int,
    horizon: int,
    rng: np.random.Generator,
    initial_state: Union[InitialState, str] = InitialState.STATIONARY,
) -> np.ndarray:
    """Sample the 0/1 reward path of one agent."""
    if agent.transitions is None:
        raise ArgumentError(f"agent {agent.id} has no transition model")
    return simulate_reward_paths(agent.transitions.probs, np.array([treat_week]), horizon, rng, initial_state)[0]


def expected_reward(
    agent: Agent,
    treat_week: int,
    horizon: int,
    initial_state: Union[InitialState, str] = InitialState.STATIONARY,
) -> float:
    """Exact expected total reward of one agent."""
    if agent.transitions is None:
        raise ArgumentError(f"agent {agent.id} has no transition model")
    return float(expected_rewards(agent.transitions.probs, np.array([treat_week]), horizon, initial_state)[0])
