'''
Tests for top-k, sequential and threshold allocation.
'''
import numpy as np
import pytest

from src.core.errors import ArgumentError
from src.policies import allocate, allocate_rounds, threshold_select


def test_single_round_picks_lowest_index():
    result = allocate([0.3, 0.1, 0.2], 1.0 / 3.0)
    assert result.selected[0].tolist() == [1]
    assert result.boundary_index == (0.1,)


def test_full_budget_selects_everyone():
    result = allocate([0.3, 0.1, 0.2], 1.0)
    assert sorted(result.all_selected().tolist()) == [0, 1, 2]


def test_ties_go_to_lowest_id():
    result = allocate([0.5, 0.5, 0.5, 0.1], 0.5, agent_ids=[7, 3, 5, 9])
    assert result.selected[0].tolist() == [9, 3]


def test_allocation_is_order_independent():
    rng = np.random.default_rng(0)
    indices = rng.integers(0, 5, 40).astype(float)
    ids = np.arange(40)
    perm = rng.permutation(40)
    first = allocate(indices, 0.25, agent_ids=ids)
    second = allocate(indices[perm], 0.25, agent_ids=ids[perm])
    assert np.array_equal(first.selected[0], second.selected[0])


def test_threshold_selection():
    assert threshold_select([0.1, 0.5, 0.5], -np.inf).tolist() == []
    assert threshold_select([0.1, 0.5, 0.5], 0.5).tolist() == [0, 1, 2]
    assert threshold_select([0.4, 0.1, 0.3], 0.3, agent_ids=[9, 4, 2]).tolist() == [2, 4]


def test_sequential_rounds():
    result = allocate_rounds([0.4, 0.1, 0.3, 0.2], 0.25, 2)
    assert [ids.tolist() for ids in result.selected] == [[1], [3]]
    assert result.boundary_index == (0.1, 0.2)
    assert result.treat_weeks(np.arange(4)).tolist() == [0, 1, 0, 2]


def test_sequential_rounds_are_disjoint():
    indices = np.random.default_rng(1).random(30)
    result = allocate_rounds(indices, 0.1, 5)
    chosen = result.all_selected()
    assert chosen.shape[0] == 15
    assert np.unique(chosen).shape[0] == 15
    assert np.all(np.diff(result.boundary_index) > 0.0)


def test_exhausted_budget():
    with pytest.raises(ArgumentError):
        allocate_rounds([0.1, 0.2, 0.3], 0.5, 2)
    with pytest.raises(ArgumentError):
        allocate([0.1, 0.2], 0.5, agent_ids=[1])
