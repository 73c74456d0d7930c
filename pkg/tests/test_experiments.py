'''
Tests for the estimand oracle, coverage experiments, sweeps and the corner-case study.
'''
import numpy as np
import pytest

from src.core.errors import ConfigurationError, NumericalError
from src.core.types import DomainTag, EstimatorName, IndexKind, PolicySpec
from src.experiments import (
    ExperimentPlan,
    ReplicateRunner,
    cohort_effect,
    corner_case_study,
    coverage_experiment,
    monte_carlo_estimand,
    plan_from_config,
    spawn_seeds,
    sweep,
)
from src.inference import evaluate_estimator
from src.simulators import SimulatorConfig, simulate_trial
from src.utils.bootstrap import DEFAULT_CONFIG


@pytest.fixture
def runner():
    return ReplicateRunner(num_workers=1, progress=False)


def _plan(**changes):
    settings = dict(
        simulator=SimulatorConfig(n=100, horizon=4),
        policy=PolicySpec(alpha=0.2),
        replicates=6,
        estimand_reps=20,
        seed=1,
    )
    settings.update(changes)
    return ExperimentPlan(**settings)


def test_spawn_seeds_streams():
    first = [s.generate_state(1)[0] for s in spawn_seeds(5, 3, stream=1)]
    again = [s.generate_state(1)[0] for s in spawn_seeds(5, 3, stream=1)]
    other = [s.generate_state(1)[0] for s in spawn_seeds(5, 3, stream=0)]
    assert first == again
    assert first != other


def test_null_effect_estimand(runner):
    plan = _plan(simulator=SimulatorConfig(n=100, horizon=4, effect_cap=0.0))
    assert cohort_effect(plan, np.random.default_rng(0)) == 0.0
    assert monte_carlo_estimand(plan, runner=runner) == 0.0


def test_corner_case_estimand_is_one(runner):
    plan = _plan(
        simulator=SimulatorConfig(domain_tag=DomainTag.CORNER_CASE, n=50, horizon=1),
        policy=PolicySpec(index_kind=IndexKind.CUSTOM_COLUMN, alpha=0.5),
    )
    assert monte_carlo_estimand(plan, runner=runner) == 1.0


def test_single_replicate(runner):
    summaries = coverage_experiment(_plan(replicates=1), runner=runner)
    for summary in summaries.values():
        assert summary.covered in (0.0, 1.0)
        assert summary.below + summary.covered + summary.above == 1.0


def test_wrong_estimand_is_never_covered(runner):
    plan = _plan(replicates=8)
    estimand = monte_carlo_estimand(plan, runner=runner)
    summaries = coverage_experiment(plan, runner=runner, estimand=estimand + 10.0)
    for summary in summaries.values():
        assert summary.covered == 0.0
        assert summary.below == 1.0


def test_regression_base_is_scored_per_agent(runner):
    plan = _plan(replicates=2, estimators=('base', 'regression_base'))
    assert plan.treated_fraction == pytest.approx(0.2)
    summaries = coverage_experiment(plan, runner=runner, estimand=1.5)
    assert summaries['base'].estimand == 1.5
    assert summaries['regression_base'].estimand == pytest.approx(0.3)


def test_worker_count_does_not_change_results(runner):
    plan = _plan(replicates=8, estimators=('base', 'subgroup', 'threshold'))
    inline = coverage_experiment(plan, runner=runner)
    pooled = coverage_experiment(plan, runner=ReplicateRunner(num_workers=2, chunk_size=1, progress=False))
    assert inline == pooled


def test_sweep_rows(runner):
    plan = _plan(sweep_axis='level', sweep_values=(0.9, 0.99))
    results = sweep(plan, runner=runner)
    assert [value for value, _ in results] == [0.9, 0.99]
    rows = [summary for _, summaries in results for summary in summaries.values()]
    assert len(rows) == 2 * len(plan.estimators)
    assert all(row.sweep_axis == 'level' for row in rows)
    for name in ('base', 'subgroup'):
        assert results[1][1][name].mean_half_width > results[0][1][name].mean_half_width
        assert results[1][1][name].estimand == results[0][1][name].estimand


def test_sweep_needs_axis(runner):
    with pytest.raises(ConfigurationError):
        sweep(_plan(), runner=runner)


def test_plan_grid_values():
    plan = _plan(policy=PolicySpec(alpha=0.2))
    assert plan.with_value('rounds', 2).policy.alpha == 0.1
    assert plan.with_value('n', 200.0).simulator.n == 200
    with pytest.raises(ConfigurationError):
        plan.with_value('n', 2.5)
    with pytest.raises(ConfigurationError):
        plan.with_value('discount', 0.5)
    with pytest.raises(ConfigurationError):
        _plan(sweep_axis='alpha', sweep_values=(0.2, 1.5))


def test_plan_validation():
    with pytest.raises(ConfigurationError):
        _plan(replicates=0)
    with pytest.raises(ConfigurationError):
        _plan(estimators=('mate_reshuffle',))
    with pytest.raises(ConfigurationError):
        _plan(policy=PolicySpec(alpha=0.2, rounds=2), upto_round=1, estimators=('base',))
    with pytest.raises(ConfigurationError):
        _plan(truncate_at=5)


def test_plan_from_default_config():
    plan = plan_from_config(DEFAULT_CONFIG)
    assert plan.simulator.domain_tag is DomainTag.SYNTHETIC
    assert EstimatorName.SUBGROUP in plan.estimators
    assert plan.inference.level == plan.level


def test_corner_case_study_shape(runner):
    results = corner_case_study(n=60, alpha=0.5, sigma=0.05, replicates=4, runner=runner)
    assert set(results) == {'base', 'subgroup', 'hybrid'}
    for result in results.values():
        assert result.replicates + result.failures == 4


def _desk_plan(**changes):
    return _plan(simulator=SimulatorConfig(n=2000, horizon=10), replicates=500, estimand_reps=1000, **changes)


@pytest.mark.slow
def test_synthetic_coverage_and_power():
    summaries = coverage_experiment(_desk_plan(), runner=ReplicateRunner(progress=False))
    for name in ('base', 'subgroup'):
        assert 0.92 <= summaries[name].covered <= 0.975
    assert summaries['subgroup'].mean_half_width / summaries['base'].mean_half_width < 0.6


@pytest.mark.slow
def test_small_budget_favours_subgroup():
    results = dict(sweep(_desk_plan(sweep_axis='alpha', sweep_values=(0.02, 0.2)), runner=ReplicateRunner(progress=False)))
    ratios = {alpha: s['subgroup'].mean_half_width / s['base'].mean_half_width for alpha, s in results.items()}
    assert ratios[0.02] < ratios[0.2]
    assert ratios[0.02] < 0.3


@pytest.mark.slow
def test_rounds_keep_base_width_at_fixed_budget():
    plan = _desk_plan(estimators=('base',), sweep_axis='rounds', sweep_values=(1, 2, 3, 4, 5))
    widths = [s['base'].mean_half_width for _, s in sweep(plan, runner=ReplicateRunner(progress=False))]
    assert max(widths) / min(widths) < 1.1


@pytest.mark.slow
def test_null_p_values_are_calibrated():
    plan = _plan(simulator=SimulatorConfig(n=500, horizon=5, effect_cap=0.0, covariate_dim=2), replicates=500)
    names = ('base', 'subgroup', 'hybrid', 'threshold', 'regression_base', 'regression_subgroup')
    points = {name: [] for name in names}
    hits = 0
    for i, seed in enumerate(spawn_seeds(plan.seed, plan.replicates)):
        data = simulate_trial(plan.sampler(), plan.horizon, np.random.default_rng(seed), seed=i)
        hits += evaluate_estimator(data, 'subgroup').p_value <= 0.05
        for name in names:
            try:
                points[name].append(evaluate_estimator(data, name).point)
            except NumericalError:
                continue
    assert 0.02 <= hits / plan.replicates <= 0.09
    for name, values in points.items():
        values = np.asarray(values)
        assert len(values) >= 0.9 * plan.replicates, name
        assert abs(values.mean()) <= 4.0 * values.std(ddof=1) / np.sqrt(len(values)), name


@pytest.mark.slow
def test_corner_case_subgroup_is_noisier():
    results = corner_case_study(n=500, alpha=0.5, sigma=0.05, replicates=2000, center='quantile',
                                runner=ReplicateRunner(progress=False))
    assert results['subgroup'].std_point > results['base'].std_point
    width_ratio = results['subgroup'].mean_ci_width / results['base'].mean_ci_width
    assert 1.10 <= width_ratio <= 1.35
    for result in results.values():
        assert abs(result.mean_point - 1.0) <= 4.0 * result.std_point / np.sqrt(result.replicates)


@pytest.mark.slow
def test_corner_case_literal_boost_misses_the_subgroup():
    # boost centred at x = 0.5, inside the untreated half when alpha = 0.5
    results = corner_case_study(n=500, alpha=0.5, sigma=0.05, replicates=1000, runner=ReplicateRunner(progress=False))
    assert results['subgroup'].std_point < results['base'].std_point
    for result in results.values():
        assert abs(result.mean_point - 1.0) <= 4.0 * result.std_point / np.sqrt(result.replicates)


@pytest.mark.slow
def test_corner_case_hybrid_is_narrowest():
    results = corner_case_study(n=500, alpha=0.5, sigma=0.08, replicates=2000, center='quantile',
                                runner=ReplicateRunner(progress=False))
    hybrid = results['hybrid'].mean_ci_width
    assert hybrid <= 0.9 * results['base'].mean_ci_width
    assert hybrid <= 0.9 * results['subgroup'].mean_ci_width
