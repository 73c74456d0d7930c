'''
Tests for the normal distribution helpers, intervals, p-values and comparisons.
'''
import numpy as np
import pytest

from src.core.errors import ArgumentError, DegenerateDataError, DegenerateVarianceError
from src.core.types import EstimateReport
from src.inference import (
    compare_policies,
    confidence_interval,
    normal_cdf,
    normal_quantile,
    normal_sf,
    p_value_positive_effect,
    two_sided_critical_value,
    var_sg_simple,
    welch_interval,
)


def test_normal_functions():
    assert normal_cdf(0.0) == 0.5
    assert np.isclose(normal_quantile(0.975), 1.959964, atol=1e-6)
    assert np.isclose(normal_cdf(normal_quantile(0.3)), 0.3)
    assert normal_sf(30.0) > 0.0
    assert np.allclose(normal_cdf(np.array([-1.0, 1.0])).sum(), 1.0)
    with pytest.raises(ArgumentError):
        normal_quantile(0.0)
    with pytest.raises(ArgumentError):
        two_sided_critical_value(1.0)


def test_confidence_interval_example():
    low, high = confidence_interval(0.0, 1.0, 100, 0.95)
    assert np.isclose(low, -0.196, atol=1e-4)
    assert np.isclose(high, 0.196, atol=1e-4)
    assert confidence_interval(2.0, 0.0, 10) == (2.0, 2.0)
    with pytest.raises(ArgumentError):
        confidence_interval(0.0, -1.0, 100)


def test_p_value_example():
    assert np.isclose(p_value_positive_effect(0.1959964, 1.0, 100), 0.025, atol=1e-4)
    assert np.isclose(p_value_positive_effect(0.0, 2.0, 50), 0.5)
    with pytest.raises(DegenerateVarianceError):
        p_value_positive_effect(1.0, 0.0, 100)


def test_compare_policies_example():
    first = EstimateReport(estimator='subgroup', point=3.0, n=100, alpha=0.2, variance=4.0)
    second = EstimateReport(estimator='subgroup', point=1.0, n=100, alpha=0.2, variance=4.0)
    low, high = compare_policies(first, second)
    assert np.isclose(low, 1.4457, atol=1e-3)
    assert np.isclose(high, 2.5543, atol=1e-3)


def test_compare_policies_rejects_mismatch():
    first = EstimateReport(estimator='base', point=1.0, n=100, alpha=0.2, variance=1.0)
    with pytest.raises(ArgumentError):
        compare_policies(first, EstimateReport(estimator='base', point=1.0, n=50, alpha=0.2, variance=1.0))
    with pytest.raises(ArgumentError):
        compare_policies(first, EstimateReport(estimator='base', point=1.0, n=100, alpha=0.2))


def test_welch_interval_contains_three_term_interval(synthetic_trial):
    data = synthetic_trial(seed=8, n=300)
    welch_low, welch_high = welch_interval(data)
    point = (welch_low + welch_high) / 2.0
    low, high = confidence_interval(point, var_sg_simple(data).value, data.n)
    assert welch_low <= low + 1e-12
    assert high <= welch_high + 1e-12


def test_welch_interval_options(synthetic_trial, hand_dataset):
    data = synthetic_trial(seed=9, rounds=2)
    low, high = welch_interval(data, estimator='base')
    assert low < high
    with pytest.raises(ArgumentError):
        welch_interval(data, estimator='threshold')
    with pytest.raises(DegenerateDataError):
        welch_interval(hand_dataset)


def test_quantile_inverts_cdf():
    p = np.random.default_rng(0).uniform(1e-6, 1.0 - 1e-6, 10000)
    assert np.max(np.abs(normal_cdf(normal_quantile(p)) - p)) < 1e-7
