'''
Tests for complete estimator reports.
'''
import numpy as np
import pytest

from src.core.errors import ArgumentError, ConfigurationError
from src.core.types import EstimatorName
from src.inference import InferenceSettings, evaluate_estimator, var_sg_knn, welch_subgroup_variance


def test_subgroup_report_is_complete(synthetic_trial):
    data = synthetic_trial(seed=20, n=300)
    report = evaluate_estimator(data, 'subgroup')
    assert report.estimator is EstimatorName.SUBGROUP
    assert report.variance_method == 'sg_simple'
    assert report.ci_low <= report.point <= report.ci_high
    assert 0.0 <= report.p_value <= 1.0


def test_point_only_estimator(hand_dataset):
    report = evaluate_estimator(hand_dataset, 'mate_reshuffle')
    assert report.variance is None
    assert not report.has_interval


def test_sequential_runs_use_welch(synthetic_trial):
    data = synthetic_trial(seed=21, rounds=2)
    subgroup = evaluate_estimator(data, 'subgroup')
    assert subgroup.variance_method == 'welch'
    assert subgroup.variance == welch_subgroup_variance(data).value
    assert evaluate_estimator(data, 'base').variance_method == 'welch'
    first_round = evaluate_estimator(data, 'subgroup', upto_round=1)
    assert first_round.variance == welch_subgroup_variance(data, upto_round=1).value


def test_first_rounds_of_single_round_flag(synthetic_trial):
    data = synthetic_trial(seed=22)
    with pytest.raises(ArgumentError):
        evaluate_estimator(data, 'base', upto_round=1)


def test_hybrid_at_zero_weight_is_subgroup_plug_in(synthetic_trial):
    data = synthetic_trial(seed=23, n=400)
    report = evaluate_estimator(data, 'hybrid', weight=0.0)
    assert report.hybrid_weight == 0.0
    assert report.variance_method == 'hyb_knn'
    assert np.isclose(report.variance, var_sg_knn(data).value)


def test_settings_select_variance(synthetic_trial):
    data = synthetic_trial(seed=24, n=300)
    settings = InferenceSettings(level=0.9, subgroup_variance='sg_knn', k=10)
    report = evaluate_estimator(data, 'subgroup', settings)
    assert report.variance_method == 'sg_knn'
    assert report.k_used == 10
    assert report.level == 0.9
    assert evaluate_estimator(data, 'threshold').variance_method == 'welch'
    assert evaluate_estimator(data, 'regression_base', InferenceSettings(ols_cov='robust')).variance_method == 'ols_robust'


def test_settings_validation():
    with pytest.raises(ConfigurationError):
        InferenceSettings(level=1.5)
    with pytest.raises(ConfigurationError):
        InferenceSettings(subgroup_variance='bootstrap')
    with pytest.raises(ConfigurationError):
        InferenceSettings(hybrid_weight='best')
    settings = InferenceSettings.from_config({'subgroup_variance': 'welch'}, level=0.8)
    assert settings.level == 0.8
