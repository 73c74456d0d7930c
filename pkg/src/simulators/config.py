"""
Index Policy Evaluation Toolkit

Module: config.py

Typed settings of the cohort simulators.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from src.core.errors import ArgumentError
from src.core.types import DomainTag


class InitialState(str, Enum):
    """Rule for drawing an agent's state before the first transition."""
    STATIONARY = "stationary"
    FIXED_GOOD = "fixed_good"
    FIXED_BAD = "fixed_bad"


class BoostCenter(str, Enum):
    """Where the corner-case reward boost is centred."""
    ALPHA = "alpha"
    QUANTILE = "quantile"


@dataclass(frozen=True)
class SimulatorConfig:
    """
    Settings shared by all cohort samplers.

    Attributes:
        domain_tag (DomainTag): Which generator to use
        n (int): Agents per trial arm
        horizon (int): Recorded timesteps per agent
        effect_cap (float): Upper bound of the uniform active-action effect
        covariate_dim (int): Length of the projected covariate vector
        seed (int): Root seed
        corner_sigma (float): Bandwidth of the corner-case reward boost
        corner_center (BoostCenter): Centre of the corner-case reward boost
        prior_strength (float): Weight of the pooled prior in count-table smoothing
        initial_state (InitialState): Start-state rule of the Markov chains
        pool_path (str, optional): Transition or count pool CSV for tb/mmitra domains
        pool_size (int): Size of the bundled stand-in pool when no file is given
    """
    domain_tag: DomainTag = DomainTag.SYNTHETIC
    n: int = 2000
    horizon: int = 10
    effect_cap: float = 0.2
    covariate_dim: int = 0
    seed: int = 0
    corner_sigma: float = 0.05
    corner_center: BoostCenter = BoostCenter.ALPHA
    prior_strength: float = 5.0
    initial_state: InitialState = InitialState.STATIONARY
    pool_path: Optional[str] = None
    pool_size: int = 100

    def __post_init__(self):
        object.__setattr__(self, "domain_tag", DomainTag(self.domain_tag))
        object.__setattr__(self, "corner_center", BoostCenter(self.corner_center))
        object.__setattr__(self, "initial_state", InitialState(self.initial_state))
        if self.n < 2:
            raise ArgumentError(f"n must be at least 2, got {self.n}")
        if self.horizon < 1:
            raise ArgumentError(f"horizon must be at least 1, got {self.horizon}")
        if not 0.0 <= self.effect_cap <= 1.0:
            raise ArgumentError(f"effect_cap must lie in [0, 1], got {self.effect_cap}")
        if self.corner_sigma <= 0.0:
            raise ArgumentError(f"corner_sigma must be positive, got {self.corner_sigma}")
        if self.covariate_dim < 0:
            raise ArgumentError("covariate_dim must be non-negative")
        if self.prior_strength < 0.0:
            raise ArgumentError("prior_strength must be non-negative")
        if self.pool_size < 1:
            raise ArgumentError("pool_size must be at least 1")
