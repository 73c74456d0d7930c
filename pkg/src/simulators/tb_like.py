"""
Index Policy Evaluation Toolkit

Module: tb_like.py

Medication-adherence-like domain. Passive dynamics are resampled with
replacement from a pool of fitted passive transition models; the active
action adds a uniform effect on [0, effect_cap] per start state, clamped
at 1.

When no pool file is configured, default_passive_pool provides a stand-in
pool with adherence-like structure: adherent agents mostly stay adherent
(T0_{1,1} ~ Beta(8, 2)) and non-adherent agents rarely recover
(T0_{0,1} ~ Beta(2, 6)).
"""

from typing import List, Optional, Sequence

import numpy as np

from src.core.errors import ConfigurationError
from src.core.types import AgentCohort, DomainTag, PolicySpec, TransitionModel, transitions_from_good_probs
from src.simulators.base_sampler import BaseCohortSampler
from src.simulators.config import SimulatorConfig

# Fixed so the bundled pool is the same on every machine
DEFAULT_POOL_SEED = 5201


def default_passive_pool(size: int = 100, seed: int = DEFAULT_POOL_SEED) -> List[TransitionModel]:
    """
    Stand-in pool of passive adherence models.

    Args:
        size: Number of models
        seed: Seed of the pool generator

    Returns:
        list: TransitionModels whose active part equals the passive part
    """
    rng = np.random.default_rng(seed)
    recover = rng.beta(2.0, 6.0, size=size)
    stay = rng.beta(8.0, 2.0, size=size)
    passive_good = np.column_stack([recover, stay])
    stack = transitions_from_good_probs(passive_good, passive_good)
    return [TransitionModel(model) for model in stack]


class TbLikeSampler(BaseCohortSampler):
    """
    Sampler drawing passive dynamics from a pool.

    Attributes:
        pool (np.ndarray): Passive good-state probabilities (pool_size, 2)
    """
    domain_tag = DomainTag.TB

    def __init__(self, config: SimulatorConfig, policy: PolicySpec, passive_pool: Sequence[TransitionModel], logger=None):
        super().__init__(config, policy, logger=logger)
        if len(passive_pool) == 0:
            self.logger.error("[X] Passive transition pool is empty")
            raise ConfigurationError("the passive transition pool is empty")
        self.pool = np.array([model.good_probs(0) for model in passive_pool])
        self.logger.debug(f"Passive pool holds {len(passive_pool)} models")

    def sample_transitions(self, size: int, rng: np.random.Generator) -> np.ndarray:
        picks = rng.integers(0, self.pool.shape[0], size=size)
        passive_good = self.pool[picks]
        effect = rng.uniform(0.0, self.config.effect_cap, size=(size, 2))
        active_good = np.minimum(passive_good + effect, 1.0)
        return transitions_from_good_probs(passive_good, active_good)


def sample_tb_like_cohort(
    cfg: SimulatorConfig,
    passive_pool: Sequence[TransitionModel],
    rng: np.random.Generator,
    policy: Optional[PolicySpec] = None,
) -> AgentCohort:
    """
    Draw cfg.n agents whose passive dynamics come from passive_pool.

    Raises:
        ConfigurationError: If the pool is empty
    """
    return TbLikeSampler(cfg, policy or PolicySpec(), passive_pool).sample(rng)
