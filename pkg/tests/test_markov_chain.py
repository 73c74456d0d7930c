'''
Tests for reward-path simulation and the analytic expected reward.
'''
import numpy as np
import pytest

from src.core.errors import ArgumentError
from src.core.types import Agent, TransitionModel, transitions_from_good_probs
from src.simulators.config import InitialState
from src.simulators.markov_chain import (
    expected_reward,
    expected_rewards,
    initial_distribution,
    simulate_reward_path,
    simulate_reward_paths,
)


def _agent(passive_good, active_good):
    return Agent(id=0, transitions=TransitionModel.from_good_probs(passive_good, active_good),
                 covariates=np.zeros(0), index=0.0)


def test_absorbing_good_state():
    agent = _agent([1.0, 1.0], [1.0, 1.0])
    path = simulate_reward_path(agent, 0, 3, np.random.default_rng(0))
    assert path.tolist() == [1.0, 1.0, 1.0]
    assert expected_reward(agent, 0, 3) == 3.0


def test_treatment_lifts_one_step():
    agent = _agent([0.0, 0.0], [1.0, 1.0])
    path = simulate_reward_path(agent, 1, 2, np.random.default_rng(0))
    assert path.tolist() == [1.0, 0.0]
    assert expected_reward(agent, 1, 2) == 1.0


def test_stationary_start_distribution():
    transitions = transitions_from_good_probs(np.array([[0.2, 0.6]]), np.array([[0.2, 0.6]]))
    # p01 = 0.2, p10 = 0.4, so the good state has weight 1/3
    start = initial_distribution(transitions, InitialState.STATIONARY)
    assert np.allclose(start, [[2.0 / 3.0, 1.0 / 3.0]])
    # the stationary law is preserved by passive steps
    assert np.isclose(expected_rewards(transitions, 0, 4)[0], 4.0 / 3.0)


def test_non_switching_chain_starts_uniform():
    transitions = transitions_from_good_probs(np.array([[0.0, 1.0]]), np.array([[0.0, 1.0]]))
    assert np.allclose(initial_distribution(transitions, 'stationary'), [[0.5, 0.5]])


def test_treat_week_range():
    transitions = transitions_from_good_probs(np.array([[0.5, 0.5]]), np.array([[0.5, 0.5]]))
    with pytest.raises(ArgumentError):
        simulate_reward_paths(transitions, np.array([4]), 3, np.random.default_rng(0))


def test_expected_reward_matches_monte_carlo():
    rng = np.random.default_rng(11)
    agents, reps, horizon = 50, 4000, 6
    passive = rng.random((agents, 2))
    active = np.minimum(passive + rng.uniform(0, 0.3, (agents, 2)), 1.0)
    transitions = transitions_from_good_probs(passive, active)
    weeks = rng.integers(0, horizon + 1, agents)

    exact = expected_rewards(transitions, weeks, horizon)
    paths = simulate_reward_paths(np.repeat(transitions, reps, axis=0), np.repeat(weeks, reps), horizon, rng)
    totals = paths.sum(axis=1).reshape(agents, reps)
    means = totals.mean(axis=1)
    standard_errors = totals.std(axis=1, ddof=1) / np.sqrt(reps)
    assert np.all(np.abs(means - exact) <= 4 * standard_errors + 1e-12)


def test_fixed_initial_states():
    transitions = transitions_from_good_probs(np.array([[0.0, 1.0]]), np.array([[0.0, 1.0]]))
    assert expected_rewards(transitions, 0, 3, InitialState.FIXED_GOOD)[0] == 3.0
    assert expected_rewards(transitions, 0, 3, InitialState.FIXED_BAD)[0] == 0.0
