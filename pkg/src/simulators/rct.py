"""
Index Policy Evaluation Toolkit

Module: rct.py

Two-arm randomized trials. The policy arm is allocated by the index policy,
round by round, while the control arm is never treated. Both arms keep their
index column so that the subgroup the policy would have selected in the
control arm can be recovered later without recomputing indices.
"""

from typing import Any, Optional, Sequence, Union

import numpy as np

from src.core.errors import ArgumentError, ConfigurationError
from src.core.types import AgentCohort, ArmTable, DomainTag, PolicySpec, RctDataset
from src.policies.allocation import allocate_rounds
from src.simulators.base_sampler import BaseCohortSampler
from src.simulators.config import InitialState, SimulatorConfig
from src.simulators.corner_case import CornerCaseSampler
from src.simulators.markov_chain import simulate_reward_paths
from src.simulators.mmitra_like import MmitraLikeSampler, default_count_pool
from src.simulators.synthetic import SyntheticSampler
from src.simulators.tb_like import TbLikeSampler, default_passive_pool
from src.utils.logger import LoggerType, get_logger



def _observed_rewards(
    cohort: AgentCohort,
    treat_weeks: np.ndarray,
    horizon: int,
    rng: np.random.Generator,
    initial_state: InitialState,
) -> np.ndarray:
    if cohort.reward_override is not None:
        if horizon != 1:
            raise ArgumentError("reward-override cohorts record a single reward; horizon must be 1")
        treated = (treat_weeks > 0).astype(np.int64)
        return cohort.reward_override[np.arange(len(cohort)), treated][:, None]
    return simulate_reward_paths(cohort.transitions, treat_weeks, horizon, rng, initial_state)


def run_rct(
    cohort_p: AgentCohort,
    cohort_c: AgentCohort,
    spec: PolicySpec,
    horizon: int,
    rng: np.random.Generator,
    initial_state: Union[InitialState, str] = InitialState.STATIONARY,
    seed: int = -1,
) -> RctDataset:
    """
    Run one two-arm trial.

    Args:
        cohort_p: Agents of the policy arm, with cached indices
        cohort_c: Agents of the control arm, with cached indices
        spec: Allocation policy
        horizon: Recorded timesteps per agent
        rng: Random generator for the reward paths
        initial_state: Start-state rule of the reward chains
        seed: Seed recorded on the dataset

    Returns:
        RctDataset: Observed trial outcome

    Raises:
        ArgumentError: If the arms differ in size, the rounds do not fit in the
            arm or the horizon, or an override cohort has horizon > 1
    """
    n = len(cohort_p)
    if len(cohort_c) != n:
        raise ArgumentError(f"arm sizes differ ({n} vs {len(cohort_c)})")
    spec.check_capacity(n)
    if spec.rounds > horizon:
        raise ArgumentError(f"{spec.rounds} allocation rounds do not fit in a horizon of {horizon}")
    initial_state = InitialState(initial_state)

    allocation = allocate_rounds(cohort_p.indices, spec.alpha, spec.rounds, agent_ids=cohort_p.ids)
    policy_weeks = allocation.treat_weeks(cohort_p.ids)
    control_weeks = np.zeros(n, dtype=np.int64)

    # Policy arm first so a fixed seed always yields the same paths
    policy_rewards = _observed_rewards(cohort_p, policy_weeks, horizon, rng, initial_state)
    control_rewards = _observed_rewards(cohort_c, control_weeks, horizon, rng, initial_state)

    return RctDataset(
        policy_arm=ArmTable(cohort_p.ids, cohort_p.indices, policy_weeks, policy_rewards, cohort_p.covariates),
        control_arm=ArmTable(cohort_c.ids, cohort_c.indices, control_weeks, control_rewards, cohort_c.covariates),
        alpha=spec.alpha,
        horizon=horizon,
        rounds=spec.rounds,
        seed=seed,
    )


def make_sampler(
    config: SimulatorConfig,
    policy: PolicySpec,
    pool: Optional[Sequence[Any]] = None,
    logger: Optional[LoggerType] = None,
) -> BaseCohortSampler:
    """
    Build the sampler for the configured domain.

    Args:
        config: Simulator settings
        policy: Policy whose index is cached on sampled agents
        pool: Passive transition models (tb) or count tables (mmitra); the
            bundled stand-in pool is used when omitted
        logger: Logger for status messages

    Returns:
        BaseCohortSampler: Sampler for config.domain_tag

    Raises:
        ConfigurationError: For the ingested domain, which has no generator
    """
    if logger is None:
        logger = get_logger(name="simulators")

    tag = config.domain_tag
    if tag is DomainTag.SYNTHETIC:
        return SyntheticSampler(config, policy, logger=logger)
    if tag is DomainTag.TB:
        if pool is None:
            logger.info(f"[+] Using the bundled passive pool ({config.pool_size} models)")
            pool = default_passive_pool(config.pool_size)
        return TbLikeSampler(config, policy, pool, logger=logger)
    if tag is DomainTag.MMITRA:
        if pool is None:
            logger.info(f"[+] Using the bundled count-table pool ({config.pool_size} tables)")
            pool = default_count_pool(config.pool_size)
        return MmitraLikeSampler(config, policy, pool, logger=logger)
    if tag is DomainTag.CORNER_CASE:
        return CornerCaseSampler(config, policy, logger=logger)
    logger.error(f"[X] No generator for domain '{tag.value}'")
    raise ConfigurationError(f"domain '{tag.value}' cannot be simulated; ingest a dataset instead")


def simulate_trial(
    sampler: BaseCohortSampler,
    horizon: int,
    rng: np.random.Generator,
    seed: int = -1,
) -> RctDataset:
    """Sample both arms from a sampler and run the trial on them."""
    cohort_p, cohort_c = sampler.sample_arms(rng)
    return run_rct(
        cohort_p,
        cohort_c,
        sampler.policy,
        horizon,
        rng,
        initial_state=sampler.config.initial_state,
        seed=seed,
    )
