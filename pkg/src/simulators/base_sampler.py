"""
Index Policy Evaluation Toolkit

Module: base_sampler.py

This module defines the abstract base class for cohort samplers. A sampler
draws agents for one domain; the base class turns the sampled transition
models into an indexed AgentCohort, projecting covariates and computing the
policy index on the way.
"""

from abc import ABC, abstractmethod
from typing import Optional, Tuple

import numpy as np

from src.core.types import AgentCohort, DomainTag, PolicySpec
from src.policies.indices import compute_indices
from src.simulators.config import SimulatorConfig
from src.utils.logger import LoggerType, get_logger



class BaseCohortSampler(ABC):
    """
    Abstract base class for domain-specific cohort samplers.

    Subclasses implement sample_transitions; sample() assembles the cohort.

    Attributes:
        config (SimulatorConfig): Simulator settings
        policy (PolicySpec): Policy whose index is cached on sampled agents
        logger: Logger for status messages
    """
    domain_tag: DomainTag = DomainTag.SYNTHETIC

    def __init__(self, config: SimulatorConfig, policy: PolicySpec, logger: Optional[LoggerType] = None):
        if logger is None:
            logger = get_logger(name="simulators")
        self.config = config
        self.policy = policy
        self.logger = logger

    @abstractmethod
    def sample_transitions(self, size: int, rng: np.random.Generator) -> np.ndarray:
        """
        Draw transition models for size agents.

        Args:
            size: Number of agents
            rng: Random generator

        Returns:
            np.ndarray: Stack (size, 2, 2, 2)
        """
        pass

    def project_covariates(self, transitions: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """
        Covariates as a fixed random linear image of the flattened transitions.

        One covariate_dim x 8 standard-normal matrix is drawn per cohort and
        left-multiplies every agent's 8-entry transition vector.
        """
        dim = self.config.covariate_dim
        if dim == 0:
            return np.zeros((transitions.shape[0], 0))
        projection = rng.standard_normal((dim, 8))
        return transitions.reshape(-1, 8) @ projection.T

    def sample(self, rng: np.random.Generator, size: Optional[int] = None) -> AgentCohort:
        """
        Draw an indexed cohort.

        Args:
            rng: Random generator
            size: Number of agents, config.n when omitted

        Returns:
            AgentCohort: Agents with covariates and cached indices
        """
        size = self.config.n if size is None else size
        transitions = self.sample_transitions(size, rng)
        covariates = self.project_covariates(transitions, rng)
        cohort = AgentCohort(
            ids=np.arange(size, dtype=np.int64),
            transitions=transitions,
            covariates=covariates,
            indices=np.zeros(size),
            domain_tag=self.domain_tag,
        )
        return cohort.with_indices(compute_indices(cohort, self.policy, rng))

    def sample_arms(self, rng: np.random.Generator) -> Tuple[AgentCohort, AgentCohort]:
        """
        Draw the two arms of a trial from one cohort of 2n agents.

        Both arms share the covariate projection, so covariates are comparable
        across arms.
        """
        n = self.config.n
        return self.sample(rng, size=2 * n).split(n)
