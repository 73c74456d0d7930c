'''
Tests for the cohort samplers and the trial runner.
'''
import numpy as np
import pytest
from scipy.stats import norm

from src.core.errors import ArgumentError, ConfigurationError
from src.core.types import DomainTag, IndexKind, PolicySpec, TransitionModel
from src.simulators import (
    BoostCenter,
    SimulatorConfig,
    boost_center,
    corner_case_cohort,
    default_count_pool,
    make_sampler,
    population_prior,
    run_rct,
    sample_mmitra_like_cohort,
    sample_synthetic_cohort,
    sample_tb_like_cohort,
    simulate_trial,
    smoothed_transitions,
)

RANDOM_POLICY = PolicySpec(index_kind=IndexKind.RANDOM)


def test_synthetic_zero_effect():
    cohort = sample_synthetic_cohort(SimulatorConfig(n=300, effect_cap=0.0), np.random.default_rng(1), RANDOM_POLICY)
    assert np.array_equal(cohort.transitions[:, 0], cohort.transitions[:, 1])


def test_synthetic_effect_range():
    cohort = sample_synthetic_cohort(SimulatorConfig(n=5000), np.random.default_rng(2), RANDOM_POLICY)
    gap = cohort.transitions[:, 1, :, 1] - cohort.transitions[:, 0, :, 1]
    assert gap.min() >= 0.0
    assert gap.max() <= 0.2 + 1e-12


def test_synthetic_determinism():
    config = SimulatorConfig(n=50, covariate_dim=3)
    first = sample_synthetic_cohort(config, np.random.default_rng(5))
    second = sample_synthetic_cohort(config, np.random.default_rng(5))
    assert np.array_equal(first.transitions, second.transitions)
    assert np.array_equal(first.covariates, second.covariates)
    assert np.array_equal(first.indices, second.indices)


def test_tb_singleton_pool():
    model = TransitionModel.from_good_probs([0.3, 0.8], [0.3, 0.8])
    config = SimulatorConfig(domain_tag=DomainTag.TB, n=40, effect_cap=0.0)
    cohort = sample_tb_like_cohort(config, [model], np.random.default_rng(0), policy=RANDOM_POLICY)
    assert np.allclose(cohort.transitions, model.probs[None])


def test_tb_empty_pool():
    config = SimulatorConfig(domain_tag=DomainTag.TB, n=10)
    with pytest.raises(ConfigurationError):
        sample_tb_like_cohort(config, [], np.random.default_rng(0), policy=RANDOM_POLICY)


def test_smoothing_hand_example():
    table = np.full((1, 2, 2, 2), 5.0)
    prior = np.full((2, 2, 2), 0.5)
    assert np.allclose(smoothed_transitions(table, prior, 5.0), 0.5)


def test_smoothing_limits():
    rng = np.random.default_rng(3)
    tables = rng.integers(1, 20, size=(4, 2, 2, 2)).astype(float)
    prior = population_prior(list(tables))
    # no observations: the prior alone
    empty = smoothed_transitions(np.zeros((1, 2, 2, 2)), prior, 5.0)
    assert np.allclose(empty[0], np.swapaxes(prior, 0, 1))
    # no prior: empirical frequencies
    data_only = smoothed_transitions(tables, prior, 0.0)
    assert np.allclose(data_only, np.swapaxes(tables / tables.sum(axis=-1, keepdims=True), 1, 2))


def test_mmitra_cohort_is_row_stochastic():
    config = SimulatorConfig(domain_tag=DomainTag.MMITRA, n=30)
    cohort = sample_mmitra_like_cohort(config, default_count_pool(20), np.random.default_rng(4), policy=RANDOM_POLICY)
    assert np.allclose(cohort.transitions.sum(axis=-1), 1.0)


def test_corner_case_cohort():
    cohort, override = corner_case_cohort(1000, 0.5, 0.05, np.random.default_rng(0))
    assert cohort.transitions is None
    assert np.allclose(override[:, 1] - override[:, 0], 1.0)
    assert np.array_equal(cohort.indices, cohort.covariates[:, 0])
    with pytest.raises(ArgumentError):
        corner_case_cohort(10, 0.5, 0.0, np.random.default_rng(0))


def test_boost_center():
    assert boost_center(0.3) == 0.3
    assert boost_center(0.5, BoostCenter.QUANTILE) == 0.0
    assert np.isclose(boost_center(0.975, "quantile"), 1.959964, atol=1e-5)


def test_boost_peaks_at_alpha_by_default():
    alpha, sigma, n = 0.5, 0.05, 2000
    _, override = corner_case_cohort(n, alpha, sigma, np.random.default_rng(7))
    replay = np.random.default_rng(7)
    x, y = replay.standard_normal(n), replay.standard_normal(n)
    boost = override[:, 0] - x - y
    assert np.allclose(boost, norm.pdf(x - alpha, loc=0.0, scale=sigma))
    peak = 1.0 / (sigma * np.sqrt(2.0 * np.pi))
    assert np.isclose(norm.pdf(0.0, loc=0.0, scale=sigma), peak)
    nearest = np.argmin(np.abs(x - alpha))
    assert boost[nearest] == pytest.approx(peak, rel=0.05)
    assert boost.max() <= peak + 1e-9


def test_run_rct_counts():
    config = SimulatorConfig(n=10, horizon=3)
    policy = PolicySpec(alpha=0.2)
    sampler = make_sampler(config, policy)
    cohort_p, cohort_c = sampler.sample_arms(np.random.default_rng(0))
    data = run_rct(cohort_p, cohort_c, policy, 3, np.random.default_rng(1))
    assert np.count_nonzero(data.policy_arm.treat_weeks == 1) == 2
    assert np.all(data.control_arm.treat_weeks == 0)
    # the two treated agents are the lowest-index ones
    treated = data.policy_arm.indices[data.policy_arm.treat_weeks == 1]
    untreated = data.policy_arm.indices[data.policy_arm.treat_weeks == 0]
    assert treated.max() <= untreated.min()


def test_run_rct_size_mismatch():
    sampler = make_sampler(SimulatorConfig(n=10), RANDOM_POLICY)
    cohort = sampler.sample(np.random.default_rng(0), size=15)
    first, second = cohort.take(np.arange(10)), cohort.take(np.arange(10, 15))
    with pytest.raises(ArgumentError):
        run_rct(first, second, RANDOM_POLICY, 2, np.random.default_rng(0))


def test_simulate_trial_determinism():
    sampler = make_sampler(SimulatorConfig(n=40, horizon=4, covariate_dim=2), PolicySpec(alpha=0.25, rounds=2))
    first = simulate_trial(sampler, 4, np.random.default_rng(9), seed=9)
    second = simulate_trial(sampler, 4, np.random.default_rng(9), seed=9)
    assert np.array_equal(first.policy_arm.rewards, second.policy_arm.rewards)
    assert np.array_equal(first.control_arm.rewards, second.control_arm.rewards)
    assert np.array_equal(first.policy_arm.treat_weeks, second.policy_arm.treat_weeks)
    assert first.rounds == 2


def test_ingested_domain_has_no_sampler():
    with pytest.raises(ConfigurationError):
        make_sampler(SimulatorConfig(domain_tag=DomainTag.INGESTED), RANDOM_POLICY)
