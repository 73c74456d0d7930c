'''
Tests for Whittle indices and index computation.
'''
import numpy as np
import pytest

from src.core.errors import ArgumentError, ConvergenceError
from src.core.types import Agent, AgentCohort, DomainTag, IndexKind, PolicySpec, TransitionModel, transitions_from_good_probs
from src.policies import compute_indices, q_value_gap, whittle_index, whittle_indices

TOL = 1e-6


def _grid_subsidy(transitions, discount, grid, sweeps=400):
    # Value iteration on every subsidy of the grid at once, then the first
    # subsidy at which staying passive in state 0 is at least as good
    passive, active = transitions[0], transitions[1]
    values = np.zeros((grid.shape[0], 2))
    landing = np.array([0.0, 1.0])
    for _ in range(sweeps):
        cont = landing[None, :] + discount * values
        q_passive = grid[:, None] + cont @ passive.T
        q_active = cont @ active.T
        values = np.maximum(q_passive, q_active)
    cont = landing[None, :] + discount * values
    q_passive = grid + cont @ passive[0]
    q_active = cont @ active[0]
    return grid[np.argmax(q_passive >= q_active)]


def test_null_effect_index_is_zero():
    rng = np.random.default_rng(0)
    passive = rng.random((20, 2))
    indices = whittle_indices(transitions_from_good_probs(passive, passive), tol=TOL)
    assert np.all(np.abs(indices) <= TOL)


def test_matches_grid_search():
    rng = np.random.default_rng(1)
    passive = rng.random((10, 2))
    active = np.minimum(passive + rng.uniform(0.0, 0.2, (10, 2)), 1.0)
    transitions = transitions_from_good_probs(passive, active)
    indices = whittle_indices(transitions, discount=0.9, tol=TOL)

    grid = np.round(np.arange(-0.5, 3.0, 1e-4), 10)
    for i in range(10):
        subsidy = _grid_subsidy(transitions[i], 0.9, grid)
        assert grid[0] < subsidy < grid[-1]
        assert abs(indices[i] + subsidy) <= 1e-4 + 2 * TOL


def test_larger_effect_gets_lower_index():
    passive = np.tile([0.3, 0.7], (4, 1))
    active = np.column_stack([[0.35, 0.45, 0.55, 0.65], np.full(4, 0.7)])
    indices = whittle_indices(transitions_from_good_probs(passive, active))
    assert np.all(np.diff(indices) < 0.0)


def test_myopic_discount_is_immediate_effect():
    rng = np.random.default_rng(2)
    passive = rng.random((15, 2))
    active = np.minimum(passive + rng.uniform(0.0, 0.3, (15, 2)), 1.0)
    indices = whittle_indices(transitions_from_good_probs(passive, active), discount=0.01)
    assert np.allclose(indices, -(active[:, 0] - passive[:, 0]), atol=0.05)


def test_gap_vanishes_at_index():
    transitions = transitions_from_good_probs(np.array([[0.2, 0.6]]), np.array([[0.4, 0.8]]))
    index = whittle_indices(transitions, tol=1e-10)
    assert abs(q_value_gap(transitions, -index, 0.9)[0]) < 1e-8


def test_single_agent_index():
    model = TransitionModel.from_good_probs([0.2, 0.6], [0.4, 0.8])
    agent = Agent(id=3, transitions=model, covariates=np.zeros(0), index=0.0)
    assert np.isclose(whittle_index(agent), whittle_indices(model.probs)[0])
    with pytest.raises(ArgumentError):
        whittle_index(Agent(id=4, transitions=None, covariates=np.zeros(0), index=0.0))


def test_bisection_step_limit():
    transitions = transitions_from_good_probs(np.array([[0.2, 0.6]]), np.array([[0.4, 0.8]]))
    with pytest.raises(ConvergenceError):
        whittle_indices(transitions, tol=1e-12, max_steps=5)


def test_empty_stack():
    assert whittle_indices(np.zeros((0, 2, 2, 2))).shape == (0,)


def _cohort(covariates):
    n = covariates.shape[0]
    passive = np.full((n, 2), 0.5)
    return AgentCohort(np.arange(n), transitions_from_good_probs(passive, passive), covariates,
                       np.zeros(n), DomainTag.SYNTHETIC)


def test_compute_indices_kinds():
    cohort = _cohort(np.array([[3.0, 1.0], [2.0, 5.0]]))
    rng = np.random.default_rng(0)
    custom = compute_indices(cohort, PolicySpec(index_kind=IndexKind.CUSTOM_COLUMN, custom_column=1), rng)
    assert custom.tolist() == [1.0, 5.0]
    random = compute_indices(cohort, PolicySpec(index_kind=IndexKind.RANDOM), rng)
    assert np.all((random >= 0.0) & (random < 1.0))
    whittle = compute_indices(cohort, PolicySpec(), rng)
    assert np.all(np.abs(whittle) <= TOL)
    with pytest.raises(ArgumentError):
        compute_indices(cohort, PolicySpec(index_kind=IndexKind.CUSTOM_COLUMN, custom_column=2), rng)
