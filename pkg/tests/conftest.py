'''
Shared fixtures: hand-built datasets and seeded synthetic trials.
'''
import numpy as np
import pytest

from src.core.types import ArmTable, IndexKind, PolicySpec, RctDataset
from src.simulators.config import SimulatorConfig
from src.simulators.rct import simulate_trial
from src.simulators.synthetic import SyntheticSampler


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False, help='run statistical acceptance tests')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


def _build_dataset(policy_indices, policy_weeks, policy_rewards, control_indices, control_rewards,
                   alpha, rounds=1, policy_covariates=None, control_covariates=None):
    policy_rewards = np.asarray(policy_rewards, dtype=float)
    control_rewards = np.asarray(control_rewards, dtype=float)
    if policy_rewards.ndim == 1:
        policy_rewards = policy_rewards[:, None]
    if control_rewards.ndim == 1:
        control_rewards = control_rewards[:, None]
    n = policy_rewards.shape[0]
    policy_covariates = np.zeros((n, 0)) if policy_covariates is None else np.asarray(policy_covariates, float)
    control_covariates = np.zeros((n, 0)) if control_covariates is None else np.asarray(control_covariates, float)
    return RctDataset(
        policy_arm=ArmTable(np.arange(n), policy_indices, policy_weeks, policy_rewards, policy_covariates),
        control_arm=ArmTable(np.arange(n), control_indices, np.zeros(n, dtype=np.int64), control_rewards,
                             control_covariates),
        alpha=alpha,
        horizon=policy_rewards.shape[1],
        rounds=rounds,
    )


@pytest.fixture
def make_dataset():
    # Builder for hand-specified trials; rewards may be totals or (n, horizon) paths
    return _build_dataset


@pytest.fixture
def hand_dataset():
    # policy indices [0.1, 0.9] rewards [7 (treated), 3]; control indices [0.2, 0.8] rewards [4, 6]
    return _build_dataset([0.1, 0.9], [1, 0], [7.0, 3.0], [0.2, 0.8], [4.0, 6.0], alpha=0.5)


def _synthetic_trial(seed=0, n=200, alpha=0.2, horizon=5, rounds=1, effect_cap=0.2, covariate_dim=0,
                     index_kind=IndexKind.WHITTLE):
    config = SimulatorConfig(n=n, horizon=horizon, effect_cap=effect_cap, covariate_dim=covariate_dim)
    policy = PolicySpec(index_kind=index_kind, alpha=alpha, rounds=rounds)
    sampler = SyntheticSampler(config, policy)
    return simulate_trial(sampler, horizon, np.random.default_rng(seed), seed=seed)


@pytest.fixture
def synthetic_trial():
    # Builder for seeded synthetic trials
    return _synthetic_trial
