"""
Index Policy Evaluation Toolkit

Module: mmitra_like.py

Mobile-health-like domain. Each agent is built from one observed
(state, action, next state) count table smoothed towards the population:

    T^a_{s,s'} = (k * P_pop(s'|s,a) + N(s,a,s')) / sum_x (k * P_pop(x|s,a) + N(s,a,x))

where P_pop pools the counts of every table in the pool and k is the prior
strength. Count tables are arrays of shape (2, 2, 2) indexed
[state, action, next_state].

default_count_pool generates stand-in tables: a latent adherence model per
table, about 30 passive observations per state and about 2 active
observations per state, so active rows lean on the prior as in sparse
intervention logs.
"""

from typing import List, Optional, Sequence

import numpy as np

from src.core.errors import ConfigurationError, DataInvariantError
from src.core.types import AgentCohort, DomainTag, PolicySpec, transitions_from_good_probs
from src.simulators.base_sampler import BaseCohortSampler
from src.simulators.config import SimulatorConfig
from src.simulators.tb_like import DEFAULT_POOL_SEED


def default_count_pool(size: int = 100, seed: int = DEFAULT_POOL_SEED + 1) -> List[np.ndarray]:
    """
    Stand-in pool of count tables.

    Args:
        size: Number of tables
        seed: Seed of the pool generator

    Returns:
        list: Integer arrays of shape (2, 2, 2) indexed [state, action, next_state]
    """
    rng = np.random.default_rng(seed)
    passive_good = np.column_stack([rng.beta(2.0, 6.0, size), rng.beta(8.0, 2.0, size)])
    active_good = np.minimum(passive_good + rng.uniform(0.0, 0.2, size=(size, 2)), 1.0)
    latent = transitions_from_good_probs(passive_good, active_good)

    tables = []
    for model in latent:
        table = np.zeros((2, 2, 2), dtype=np.int64)
        for state in (0, 1):
            for action, mean_visits in ((0, 30.0), (1, 2.0)):
                visits = rng.poisson(mean_visits)
                good = rng.binomial(visits, model[action, state, 1])
                table[state, action] = (visits - good, good)
        tables.append(table)
    return tables


def population_prior(count_pool: Sequence[np.ndarray]) -> np.ndarray:
    """
    Pooled next-state frequencies P_pop(s'|s,a).

    Raises:
        ConfigurationError: If the pool is empty or a (state, action) row has no mass
    """
    if len(count_pool) == 0:
        raise ConfigurationError("the count-table pool is empty")
    pooled = np.sum(np.asarray(count_pool, dtype=float), axis=0)
    mass = pooled.sum(axis=-1, keepdims=True)
    if np.any(mass <= 0.0):
        raise ConfigurationError("a (state, action) row has no observations in the pooled count tables")
    return pooled / mass


def smoothed_transitions(tables: np.ndarray, prior: np.ndarray, prior_strength: float) -> np.ndarray:
    """
    Prior-smoothed transition stack for a stack of count tables.

    Args:
        tables: Counts (m, 2, 2, 2) indexed [agent, state, action, next_state]
        prior: Pooled frequencies (2, 2, 2)
        prior_strength: Prior weight k

    Returns:
        np.ndarray: Transitions (m, 2, 2, 2) indexed [agent, action, from_state, to_state]
    """
    weights = prior_strength * prior[None] + tables
    totals = weights.sum(axis=-1, keepdims=True)
    if np.any(totals <= 0.0):
        raise ConfigurationError("a count-table row has no observations and the prior strength is 0")
    return np.swapaxes(weights / totals, 1, 2)


class MmitraLikeSampler(BaseCohortSampler):
    """
    Sampler building agents from prior-smoothed count tables.

    Attributes:
        tables (np.ndarray): Count pool (pool_size, 2, 2, 2)
        prior (np.ndarray): Pooled next-state frequencies
    """
    domain_tag = DomainTag.MMITRA

    def __init__(self, config: SimulatorConfig, policy: PolicySpec, count_pool: Sequence[np.ndarray], logger=None):
        super().__init__(config, policy, logger=logger)
        try:
            self.prior = population_prior(count_pool)
        except ConfigurationError as e:
            self.logger.error(f"[X] {e}")
            raise
        self.tables = np.asarray(count_pool, dtype=float)
        if np.any(self.tables < 0.0):
            raise DataInvariantError("count_sign", "count tables must be non-negative")

    def sample_transitions(self, size: int, rng: np.random.Generator) -> np.ndarray:
        picks = rng.integers(0, self.tables.shape[0], size=size)
        return smoothed_transitions(self.tables[picks], self.prior, self.config.prior_strength)


def sample_mmitra_like_cohort(
    cfg: SimulatorConfig,
    trajectory_pool: Sequence[np.ndarray],
    rng: np.random.Generator,
    policy: Optional[PolicySpec] = None,
) -> AgentCohort:
    """
    Draw cfg.n agents from prior-smoothed count tables.

    Raises:
        ConfigurationError: If the pool is empty or a pooled row has no mass
    """
    return MmitraLikeSampler(cfg, policy or PolicySpec(), trajectory_pool).sample(rng)
