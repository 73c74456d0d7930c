"""
Index Policy Evaluation Toolkit

Module: synthetic.py

Synthetic domain: every agent's passive probability of moving to the good
state is uniform on [0, 1] for each start state, and the active action adds
an independent uniform effect on [0, effect_cap], clamped at 1.
"""

from typing import Optional

import numpy as np

from src.core.errors import ArgumentError
from src.core.types import AgentCohort, DomainTag, PolicySpec, transitions_from_good_probs
from src.simulators.base_sampler import BaseCohortSampler
from src.simulators.config import SimulatorConfig


class SyntheticSampler(BaseCohortSampler):
    """Sampler for the fully synthetic two-state domain."""
    domain_tag = DomainTag.SYNTHETIC

    def sample_transitions(self, size: int, rng: np.random.Generator) -> np.ndarray:
        passive_good = rng.random((size, 2))
        effect = rng.uniform(0.0, self.config.effect_cap, size=(size, 2))
        active_good = np.minimum(passive_good + effect, 1.0)
        return transitions_from_good_probs(passive_good, active_good)


def sample_synthetic_cohort(
    cfg: SimulatorConfig,
    rng: np.random.Generator,
    policy: Optional[PolicySpec] = None,
) -> AgentCohort:
    """
    Draw cfg.n synthetic agents with cached indices.

    Args:
        cfg: Simulator settings, domain must be synthetic
        rng: Random generator
        policy: Policy whose index is cached, Whittle defaults when omitted

    Returns:
        AgentCohort: The sampled cohort
    """
    if cfg.domain_tag is not DomainTag.SYNTHETIC:
        raise ArgumentError(f"expected a synthetic configuration, got '{cfg.domain_tag.value}'")
    return SyntheticSampler(cfg, policy or PolicySpec()).sample(rng)
