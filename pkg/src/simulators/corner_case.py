"""
Index Policy Evaluation Toolkit

Module: corner_case.py

Corner-case generator in which the subgroup estimator is noisier than the
base estimator. Each agent has one standard-normal covariate x that is used
directly as its index. Rewards are defined without a Markov chain:

    R(0) = x + y + z,   y ~ N(0, 1),   z = pdf(x - c; 0, sigma)
    R(1) = R(0) + 1

so the treatment effect is exactly 1 for every agent. The boost z is
concentrated on agents whose index is near c. By default c = alpha; the
"quantile" variant uses c = Phi^-1(alpha), the index value separating treated
from untreated agents, which puts the boost on the allocation boundary.
"""

from typing import Optional, Tuple, Union

import numpy as np
from scipy.stats import norm

from src.core.errors import ArgumentError
from src.core.types import AgentCohort, DomainTag, PolicySpec
from src.simulators.base_sampler import BaseCohortSampler
from src.simulators.config import BoostCenter, SimulatorConfig


def boost_center(alpha: float, center: Union[BoostCenter, str] = BoostCenter.ALPHA) -> float:
    """Index value the reward boost is centred on: alpha itself, or the alpha-quantile of N(0, 1)."""
    if BoostCenter(center) is BoostCenter.QUANTILE:
        return float(norm.ppf(alpha))
    return float(alpha)


def corner_case_cohort(
    n: int,
    alpha: float,
    sigma: float,
    rng: np.random.Generator,
    center: Union[BoostCenter, str] = BoostCenter.ALPHA,
) -> Tuple[AgentCohort, np.ndarray]:
    """
    Draw n corner-case agents.

    Args:
        n: Number of agents
        alpha: Treatment fraction, locates the boost
        sigma: Bandwidth of the boost
        rng: Random generator
        center: Boost centre rule

    Returns:
        tuple: (cohort, reward_override) with the override of shape (n, 2)
            holding R(0) and R(1)

    Raises:
        ArgumentError: If sigma is not positive
    """
    if sigma <= 0.0:
        raise ArgumentError(f"sigma must be positive, got {sigma}")
    x = rng.standard_normal(n)
    y = rng.standard_normal(n)
    z = norm.pdf(x - boost_center(alpha, center), loc=0.0, scale=sigma)
    untreated = x + y + z
    cohort = AgentCohort(
        ids=np.arange(n, dtype=np.int64),
        transitions=None,
        covariates=x[:, None],
        indices=x,
        domain_tag=DomainTag.CORNER_CASE,
        reward_override=np.column_stack([untreated, untreated + 1.0]),
    )
    return cohort, cohort.reward_override


class CornerCaseSampler(BaseCohortSampler):
    """Sampler wrapping corner_case_cohort; the index is the covariate itself."""
    domain_tag = DomainTag.CORNER_CASE

    def __init__(self, config: SimulatorConfig, policy: PolicySpec, logger=None):
        super().__init__(config, policy, logger=logger)
        if config.horizon != 1:
            raise ArgumentError("corner-case trials record a single reward; set horizon to 1")

    def sample_transitions(self, size: int, rng: np.random.Generator) -> np.ndarray:
        raise ArgumentError("corner-case agents have no transition model")

    def sample(self, rng: np.random.Generator, size: Optional[int] = None) -> AgentCohort:
        size = self.config.n if size is None else size
        cohort, _ = corner_case_cohort(
            size, self.policy.alpha, self.config.corner_sigma, rng, center=self.config.corner_center
        )
        return cohort
