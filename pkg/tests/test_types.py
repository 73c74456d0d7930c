'''
Tests for the domain types and their invariants.
'''
import math

import numpy as np
import pytest

from src.core.errors import ArgumentError, DataInvariantError
from src.core.types import (
    Arm,
    CoverageSummary,
    EstimateReport,
    EstimatorName,
    PolicySpec,
    RctDataset,
    RctRecord,
    TransitionModel,
    budget_per_round,
    total_reward,
)


def _record(path):
    return RctRecord(agent_id=0, arm=Arm.POLICY, index=0.0, treat_week=0, reward_path=path)


def test_total_reward_examples():
    assert total_reward(_record([1, 1, 0, 1])) == 3
    assert total_reward(_record([1, 1, 0, 1]), truncate_at=2) == 2
    assert total_reward(_record([0, 0, 0]), truncate_at=1) == 0


def test_total_reward_truncation_out_of_range():
    with pytest.raises(ArgumentError):
        total_reward(_record([1, 0]), truncate_at=3)
    with pytest.raises(ArgumentError):
        total_reward(_record([1, 0]), truncate_at=0)


def test_budget_per_round():
    assert budget_per_round(0.2, 10) == 2
    assert budget_per_round(0.25, 10) == 3
    # 1/3 * 3 is 1 up to rounding; the slack keeps it from becoming 2
    assert budget_per_round(1.0 / 3.0, 3) == 1
    assert budget_per_round(1.0, 7) == 7


def test_transition_model_rejects_bad_rows():
    probs = np.full((2, 2, 2), 0.5)
    TransitionModel(probs)
    probs[1, 0] = [0.6, 0.6]
    with pytest.raises(DataInvariantError):
        TransitionModel(probs)


def test_transition_model_from_good_probs():
    model = TransitionModel.from_good_probs([0.2, 0.7], [0.3, 0.9])
    assert np.allclose(model.good_probs(0), [0.2, 0.7])
    assert np.allclose(model.good_probs(1), [0.3, 0.9])
    assert np.allclose(model.probs.sum(axis=-1), 1.0)


def test_policy_spec_capacity():
    PolicySpec(alpha=0.25, rounds=4).check_capacity(8)
    with pytest.raises(ArgumentError):
        PolicySpec(alpha=0.3, rounds=4).check_capacity(10)
    with pytest.raises(ArgumentError):
        PolicySpec(alpha=0.0)


def test_control_record_must_be_untreated():
    with pytest.raises(DataInvariantError):
        RctRecord(agent_id=0, arm=Arm.CONTROL, index=0.0, treat_week=1, reward_path=[1.0])


def test_dataset_round_budget_invariant(make_dataset):
    # alpha = 0.5 of 2 agents treats exactly 1, not 2
    with pytest.raises(DataInvariantError) as info:
        make_dataset([0.1, 0.9], [1, 1], [1.0, 1.0], [0.2, 0.8], [1.0, 1.0], alpha=0.5)
    assert info.value.invariant == 'round_budget'


def test_dataset_accepts_negative_rewards(make_dataset):
    data = make_dataset([-0.3, 1.2], [1, 0], [-1.5, 0.4], [-0.1, 0.9], [-2.0, 0.7], alpha=0.5)
    assert data.policy_arm.totals().tolist() == [-1.5, 0.4]


def test_dataset_from_records_round_trip(hand_dataset):
    rebuilt = RctDataset.from_records(hand_dataset.records(), alpha=hand_dataset.alpha)
    assert np.array_equal(rebuilt.policy_arm.rewards, hand_dataset.policy_arm.rewards)
    assert np.array_equal(rebuilt.control_arm.indices, hand_dataset.control_arm.indices)
    assert rebuilt.budget() == 1


def test_estimate_report_serialisation():
    report = EstimateReport(
        estimator=EstimatorName.SUBGROUP, point=1.0 / 3.0, n=100, alpha=0.2, variance=2.0,
        ci_low=1.0 / 3.0 - 0.5, ci_high=1.0 / 3.0 + 0.5, p_value=0.1,
    )
    payload = report.to_dict(digits=9)
    assert payload['estimator'] == 'subgroup'
    assert payload['point'] == 0.333333333
    assert EstimateReport.from_dict(report.to_dict()).point == report.point


def test_estimate_report_interval_must_be_symmetric():
    with pytest.raises(DataInvariantError):
        EstimateReport(estimator='base', point=0.0, n=10, alpha=0.5, variance=1.0, ci_low=-1.0, ci_high=2.0)


def test_coverage_fractions_sum_to_one():
    CoverageSummary('base', 0.02, 0.95, 0.03, 0.1, 100, 1.0)
    with pytest.raises(DataInvariantError):
        CoverageSummary('base', 0.1, 0.95, 0.03, 0.1, 100, 1.0)
    empty = CoverageSummary('base', math.nan, math.nan, math.nan, math.nan, 0, 1.0)
    assert empty.replicates == 0
