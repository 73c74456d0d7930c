"""
Index Policy Evaluation Toolkit

Module: types.py

This module defines the shared domain model: transition models, agents and
cohorts, policy specifications, two-arm trial datasets and the reports the
estimators and experiments produce. Array-valued fields are copied into
read-only numpy arrays at construction, so every instance is immutable and
can be handed to worker processes as is.

Cohorts and trial arms are stored column-wise (one array per field) because
the estimators and simulators operate on whole arms at once; the row types
Agent and RctRecord are materialised on demand for ingestion, export and
inspection.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.core.errors import ArgumentError, DataInvariantError

# Absolute tolerance on transition row sums
PROB_TOL = 1e-12

# Guard against alpha * n landing a hair above an integer in floating point
_CEIL_SLACK = 1e-9


class Arm(str, Enum):
    POLICY = "policy"
    CONTROL = "control"


class DomainTag(str, Enum):
    SYNTHETIC = "synthetic"
    TB = "tb"
    MMITRA = "mmitra"
    CORNER_CASE = "corner_case"
    INGESTED = "ingested"


class IndexKind(str, Enum):
    WHITTLE = "whittle"
    RANDOM = "random"
    CUSTOM_COLUMN = "custom_column"


class EstimatorName(str, Enum):
    BASE = "base"
    SUBGROUP = "subgroup"
    THRESHOLD = "threshold"
    HYBRID = "hybrid"
    MATE_RESHUFFLE = "mate_reshuffle"
    REGRESSION_BASE = "regression_base"
    REGRESSION_SUBGROUP = "regression_subgroup"


def budget_per_round(alpha: float, n: int) -> int:
    """
    Number of agents treated in one allocation round, ceil(alpha * n).

    Args:
        alpha: Treatment fraction in (0, 1]
        n: Number of agents in the arm

    Returns:
        int: The per-round budget
    """
    return int(math.ceil(alpha * n - _CEIL_SLACK))


def _readonly(values: Any, dtype: Any = float, ndim: Optional[int] = None) -> np.ndarray:
    array = np.array(values, dtype=dtype, copy=True)
    if ndim is not None and array.ndim != ndim:
        raise ArgumentError(f"expected a {ndim}-dimensional array, got shape {array.shape}")
    array.setflags(write=False)
    return array


def _check_transition_array(probs: np.ndarray, tol: float = PROB_TOL) -> None:
    """Validate one (2,2,2) model or a stack of shape (n,2,2,2)."""
    if probs.shape[-3:] != (2, 2, 2):
        raise DataInvariantError("transition_shape", f"expected trailing shape (2, 2, 2), got {probs.shape}")
    if not np.all(np.isfinite(probs)) or np.any(probs < 0.0) or np.any(probs > 1.0):
        raise DataInvariantError("probability_range", "transition probabilities must lie in [0, 1]")
    row_error = np.abs(probs.sum(axis=-1) - 1.0)
    if np.any(row_error > tol):
        raise DataInvariantError(
            "row_sum", f"transition rows must sum to 1 (max deviation {row_error.max():.3e})"
        )


def transitions_from_good_probs(passive_good: np.ndarray, active_good: np.ndarray) -> np.ndarray:
    """
    Build a transition stack from the probabilities of moving to the good state.

    Args:
        passive_good: Array (..., 2) of T^0_{s,1} for s in {0, 1}
        active_good: Array (..., 2) of T^1_{s,1}

    Returns:
        np.ndarray: Array (..., 2, 2, 2) indexed [action, from_state, to_state]
    """
    good = np.stack([passive_good, active_good], axis=-2)
    return np.stack([1.0 - good, good], axis=-1)


@dataclass(frozen=True, eq=False)
class TransitionModel:
    """
    Per-agent two-state, two-action Markov transition probabilities.

    Attributes:
        probs (np.ndarray): Array of shape (2, 2, 2) indexed [action, from_state, to_state]
    """
    probs: np.ndarray

    def __post_init__(self):
        probs = _readonly(self.probs)
        _check_transition_array(probs)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def from_good_probs(cls, passive_good: Sequence[float], active_good: Sequence[float]) -> "TransitionModel":
        return cls(transitions_from_good_probs(np.asarray(passive_good, float), np.asarray(active_good, float)))

    @property
    def passive(self) -> np.ndarray:
        return self.probs[0]

    @property
    def active(self) -> np.ndarray:
        return self.probs[1]

    def good_probs(self, action: int) -> np.ndarray:
        """Probabilities T^a_{s,1} of landing in the good state from each state."""
        return self.probs[action, :, 1]

    def flatten(self) -> np.ndarray:
        """The 8 entries in (action, from_state, to_state) order."""
        return self.probs.reshape(8).copy()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TransitionModel):
            return NotImplemented
        return bool(np.array_equal(self.probs, other.probs))

    def __hash__(self) -> int:
        return hash(self.probs.tobytes())


@dataclass(frozen=True, eq=False)
class Agent:
    """
    One agent: its dynamics, covariates and cached policy index.

    Attributes:
        id (int): Identifier, unique within its cohort
        transitions (TransitionModel, optional): Dynamics; absent for corner-case agents
        covariates (np.ndarray): Covariate vector of length m >= 0
        index (float): Cached index value, lower means more worth treating
    """
    id: int
    transitions: Optional[TransitionModel]
    covariates: np.ndarray
    index: float

    def __post_init__(self):
        object.__setattr__(self, "covariates", _readonly(self.covariates, ndim=1))
        if not math.isfinite(self.index):
            raise DataInvariantError("finite_index", f"agent {self.id} has a non-finite index")


@dataclass(frozen=True, eq=False)
class AgentCohort:
    """
    A sampled or ingested set of agents, stored column-wise.

    Attributes:
        ids (np.ndarray): Agent ids, unique
        transitions (np.ndarray, optional): Stack (n, 2, 2, 2); absent for reward-override cohorts
        covariates (np.ndarray): Matrix (n, m)
        indices (np.ndarray): Cached index per agent
        domain_tag (DomainTag): Domain the cohort was drawn from
        reward_override (np.ndarray, optional): Matrix (n, 2) of rewards R(0), R(1)
            used instead of MDP simulation
    """
    ids: np.ndarray
    transitions: Optional[np.ndarray]
    covariates: np.ndarray
    indices: np.ndarray
    domain_tag: DomainTag
    reward_override: Optional[np.ndarray] = None

    def __post_init__(self):
        ids = _readonly(self.ids, dtype=np.int64, ndim=1)
        n = ids.shape[0]
        covariates = _readonly(self.covariates, ndim=2) if np.size(self.covariates) else np.zeros((n, 0))
        covariates.setflags(write=False)
        indices = _readonly(self.indices, ndim=1)

        if np.unique(ids).shape[0] != n:
            raise DataInvariantError("unique_ids", "agent ids within a cohort must be unique")
        if covariates.shape[0] != n or indices.shape[0] != n:
            raise DataInvariantError("cohort_shape", "covariates and indices must have one row per agent")
        if not np.all(np.isfinite(indices)):
            raise DataInvariantError("finite_index", "every agent index must be finite")

        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "covariates", covariates)
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "domain_tag", DomainTag(self.domain_tag))

        if self.transitions is not None:
            transitions = _readonly(self.transitions)
            if transitions.shape != (n, 2, 2, 2):
                raise DataInvariantError("cohort_shape", f"expected transitions of shape ({n}, 2, 2, 2)")
            _check_transition_array(transitions)
            object.__setattr__(self, "transitions", transitions)
        if self.reward_override is not None:
            override = _readonly(self.reward_override, ndim=2)
            if override.shape != (n, 2):
                raise DataInvariantError("cohort_shape", f"expected a reward override of shape ({n}, 2)")
            object.__setattr__(self, "reward_override", override)
        if self.transitions is None and self.reward_override is None:
            raise DataInvariantError("cohort_rewards", "a cohort needs transitions or a reward override")

    @classmethod
    def from_agents(cls, agents: Sequence[Agent], domain_tag: DomainTag) -> "AgentCohort":
        """
        Assemble a cohort from Agent rows. All agents must carry transitions.

        Args:
            agents: Ordered agents
            domain_tag: Domain of the cohort

        Returns:
            AgentCohort: The column-wise cohort
        """
        if any(agent.transitions is None for agent in agents):
            raise DataInvariantError("cohort_rewards", "agents without transitions need a reward override")
        dim = agents[0].covariates.shape[0] if agents else 0
        return cls(
            ids=np.array([agent.id for agent in agents], dtype=np.int64),
            transitions=np.array([agent.transitions.probs for agent in agents]).reshape(len(agents), 2, 2, 2),
            covariates=np.array([agent.covariates for agent in agents]).reshape(len(agents), dim),
            indices=np.array([agent.index for agent in agents], dtype=float),
            domain_tag=domain_tag,
        )

    def __len__(self) -> int:
        return int(self.ids.shape[0])

    @property
    def size(self) -> int:
        return len(self)

    @property
    def covariate_dim(self) -> int:
        return int(self.covariates.shape[1])

    def agent(self, position: int) -> Agent:
        transitions = None if self.transitions is None else TransitionModel(self.transitions[position])
        return Agent(
            id=int(self.ids[position]),
            transitions=transitions,
            covariates=self.covariates[position],
            index=float(self.indices[position]),
        )

    @property
    def agents(self) -> List[Agent]:
        return [self.agent(i) for i in range(len(self))]

    def with_indices(self, indices: np.ndarray) -> "AgentCohort":
        """Copy of the cohort with a new cached index column."""
        return AgentCohort(
            ids=self.ids,
            transitions=self.transitions,
            covariates=self.covariates,
            indices=indices,
            domain_tag=self.domain_tag,
            reward_override=self.reward_override,
        )

    def take(self, positions: np.ndarray) -> "AgentCohort":
        """Sub-cohort at the given positions, with ids renumbered 0..len-1."""
        positions = np.asarray(positions, dtype=np.int64)
        return AgentCohort(
            ids=np.arange(positions.shape[0], dtype=np.int64),
            transitions=None if self.transitions is None else self.transitions[positions],
            covariates=self.covariates[positions],
            indices=self.indices[positions],
            domain_tag=self.domain_tag,
            reward_override=None if self.reward_override is None else self.reward_override[positions],
        )

    def split(self, n: int) -> Tuple["AgentCohort", "AgentCohort"]:
        """
        Split into a first and second cohort of n agents each.

        Raises:
            ArgumentError: If the cohort does not hold exactly 2n agents
        """
        if len(self) != 2 * n:
            raise ArgumentError(f"cannot split a cohort of {len(self)} agents into two arms of {n}")
        positions = np.arange(2 * n)
        return self.take(positions[:n]), self.take(positions[n:])


@dataclass(frozen=True)
class PolicySpec:
    """
    An index-based allocation policy.

    Attributes:
        index_kind (IndexKind): How indices are computed
        alpha (float): Fraction of agents treated per round, in (0, 1]
        rounds (int): Allocation rounds; 1 is single-shot, more is sequential
        custom_column (int): Covariate column used by the custom_column kind
        discount (float): Whittle discount factor in (0, 1)
        evaluation_state (int): State whose Whittle subsidy is the index
        whittle_tol (float): Bisection and solver tolerance
    """
    index_kind: IndexKind = IndexKind.WHITTLE
    alpha: float = 0.2
    rounds: int = 1
    custom_column: int = 0
    discount: float = 0.9
    evaluation_state: int = 0
    whittle_tol: float = 1e-6

    def __post_init__(self):
        object.__setattr__(self, "index_kind", IndexKind(self.index_kind))
        if not 0.0 < self.alpha <= 1.0:
            raise ArgumentError(f"alpha must lie in (0, 1], got {self.alpha}")
        if self.rounds < 1:
            raise ArgumentError(f"rounds must be at least 1, got {self.rounds}")
        if not 0.0 < self.discount < 1.0:
            raise ArgumentError(f"discount must lie in (0, 1), got {self.discount}")
        if self.evaluation_state not in (0, 1):
            raise ArgumentError(f"evaluation_state must be 0 or 1, got {self.evaluation_state}")
        if self.whittle_tol <= 0.0:
            raise ArgumentError("whittle_tol must be positive")
        if self.custom_column < 0:
            raise ArgumentError("custom_column must be non-negative")

    def budget(self, n: int) -> int:
        return budget_per_round(self.alpha, n)

    def check_capacity(self, n: int) -> None:
        """
        Raises:
            ArgumentError: If rounds * ceil(alpha * n) exceeds n
        """
        if self.rounds * self.budget(n) > n:
            raise ArgumentError(
                f"{self.rounds} rounds of {self.budget(n)} treatments exceed the {n} agents of an arm"
            )


def check_truncation(truncate_at: Optional[int], horizon: int) -> int:
    """
    Resolve a truncation point against a horizon.

    Returns:
        int: Number of leading timesteps to keep

    Raises:
        ArgumentError: If truncate_at is outside [1, horizon]
    """
    if truncate_at is None:
        return horizon
    if not 1 <= truncate_at <= horizon:
        raise ArgumentError(f"truncate_at must lie in [1, {horizon}], got {truncate_at}")
    return int(truncate_at)


@dataclass(frozen=True, eq=False)
class RctRecord:
    """
    One observed agent of a two-arm trial.

    Attributes:
        agent_id (int): Agent id within its arm
        arm (Arm): Trial arm
        index (float): Policy index of the agent
        treat_week (int): Round of treatment, 0 for never treated
        reward_path (np.ndarray): Per-timestep rewards; 0/1 good-state
            indicators for MDP domains
        covariates (np.ndarray): Covariate vector
    """
    agent_id: int
    arm: Arm
    index: float
    treat_week: int
    reward_path: np.ndarray
    covariates: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        object.__setattr__(self, "arm", Arm(self.arm))
        object.__setattr__(self, "reward_path", _readonly(self.reward_path, ndim=1))
        object.__setattr__(self, "covariates", _readonly(self.covariates, ndim=1))
        if self.treat_week < 0:
            raise DataInvariantError("treat_week_range", f"agent {self.agent_id} has a negative treat_week")
        if self.arm is Arm.CONTROL and self.treat_week != 0:
            raise DataInvariantError("control_untreated", f"control agent {self.agent_id} is marked treated")

    @property
    def horizon(self) -> int:
        return int(self.reward_path.shape[0])


def total_reward(record: RctRecord, truncate_at: Optional[int] = None) -> float:
    """
    Sum of the first min(truncate_at, horizon) rewards of a record.

    Args:
        record: Observed agent
        truncate_at: Optional number of leading timesteps to keep

    Returns:
        float: Total (possibly truncated) reward

    Raises:
        ArgumentError: If truncate_at is outside [1, horizon]
    """
    keep = check_truncation(truncate_at, record.horizon)
    return float(record.reward_path[:keep].sum())


@dataclass(frozen=True, eq=False)
class ArmTable:
    """
    Column-wise storage for one arm of a trial.

    Attributes:
        agent_ids (np.ndarray): Agent ids
        indices (np.ndarray): Policy index per agent
        treat_weeks (np.ndarray): Treatment round per agent, 0 for never
        rewards (np.ndarray): Matrix (n, horizon) of per-timestep rewards
        covariates (np.ndarray): Matrix (n, m)
    """
    agent_ids: np.ndarray
    indices: np.ndarray
    treat_weeks: np.ndarray
    rewards: np.ndarray
    covariates: np.ndarray

    def __post_init__(self):
        agent_ids = _readonly(self.agent_ids, dtype=np.int64, ndim=1)
        n = agent_ids.shape[0]
        object.__setattr__(self, "agent_ids", agent_ids)
        object.__setattr__(self, "indices", _readonly(self.indices, ndim=1))
        object.__setattr__(self, "treat_weeks", _readonly(self.treat_weeks, dtype=np.int64, ndim=1))
        object.__setattr__(self, "rewards", _readonly(self.rewards, ndim=2))
        covariates = np.asarray(self.covariates, dtype=float)
        if covariates.size == 0:
            covariates = np.zeros((n, 0))
        object.__setattr__(self, "covariates", _readonly(covariates, ndim=2))

        for name in ("indices", "treat_weeks", "rewards", "covariates"):
            if getattr(self, name).shape[0] != n:
                raise DataInvariantError("arm_shape", f"column '{name}' does not have one row per agent")
        if np.unique(agent_ids).shape[0] != n:
            raise DataInvariantError("unique_ids", "agent ids within an arm must be unique")
        if not np.all(np.isfinite(self.indices)):
            raise DataInvariantError("finite_index", "every agent index must be finite")
        if np.any(self.treat_weeks < 0):
            raise DataInvariantError("treat_week_range", "treat_week must be non-negative")

    @property
    def n(self) -> int:
        return int(self.agent_ids.shape[0])

    @property
    def horizon(self) -> int:
        return int(self.rewards.shape[1])

    @property
    def covariate_dim(self) -> int:
        return int(self.covariates.shape[1])

    def totals(self, truncate_at: Optional[int] = None) -> np.ndarray:
        """Per-agent total reward over the first truncate_at timesteps."""
        keep = check_truncation(truncate_at, self.horizon)
        return self.rewards[:, :keep].sum(axis=1)

    def records(self, arm: Arm) -> Iterator[RctRecord]:
        for i in range(self.n):
            yield RctRecord(
                agent_id=int(self.agent_ids[i]),
                arm=arm,
                index=float(self.indices[i]),
                treat_week=int(self.treat_weeks[i]),
                reward_path=self.rewards[i],
                covariates=self.covariates[i],
            )

    @classmethod
    def from_records(cls, records: Sequence[RctRecord]) -> "ArmTable":
        horizon = records[0].horizon if records else 0
        dim = records[0].covariates.shape[0] if records else 0
        if any(r.horizon != horizon for r in records):
            raise DataInvariantError("horizon", "all reward paths of an arm must share one horizon")
        if any(r.covariates.shape[0] != dim for r in records):
            raise DataInvariantError("covariate_dim", "all records of an arm must share one covariate dimension")
        return cls(
            agent_ids=np.array([r.agent_id for r in records], dtype=np.int64),
            indices=np.array([r.index for r in records], dtype=float),
            treat_weeks=np.array([r.treat_week for r in records], dtype=np.int64),
            rewards=np.array([r.reward_path for r in records], dtype=float).reshape(len(records), horizon),
            covariates=np.array([r.covariates for r in records], dtype=float).reshape(len(records), dim),
        )


@dataclass(frozen=True, eq=False)
class RctDataset:
    """
    The observed outcome of a two-arm trial.

    Attributes:
        policy_arm (ArmTable): Arm whose agents were allocated by the policy
        control_arm (ArmTable): Arm that was never treated
        alpha (float): Per-round treatment fraction
        horizon (int): Number of recorded timesteps
        rounds (int): Allocation rounds
        seed (int): Seed the trial was generated from, -1 for ingested data
    """
    policy_arm: ArmTable
    control_arm: ArmTable
    alpha: float
    horizon: int
    rounds: int = 1
    seed: int = -1

    def __post_init__(self):
        n = self.policy_arm.n
        if self.control_arm.n != n:
            raise DataInvariantError("equal_arms", f"arm sizes differ ({n} vs {self.control_arm.n})")
        if n < 2:
            raise DataInvariantError("arm_size", "each arm needs at least 2 agents")
        if not 0.0 < self.alpha <= 1.0:
            raise DataInvariantError("alpha_range", f"alpha must lie in (0, 1], got {self.alpha}")
        if self.rounds < 1:
            raise DataInvariantError("round_budget", "rounds must be at least 1")
        for arm in (self.policy_arm, self.control_arm):
            if arm.horizon != self.horizon:
                raise DataInvariantError("horizon", f"reward paths have {arm.horizon} steps, expected {self.horizon}")
        if self.policy_arm.covariate_dim != self.control_arm.covariate_dim:
            raise DataInvariantError("covariate_dim", "arms must share one covariate dimension")
        if np.any(self.control_arm.treat_weeks != 0):
            raise DataInvariantError("control_untreated", "control-arm agents must have treat_week 0")

        weeks = self.policy_arm.treat_weeks
        if np.any(weeks > self.rounds):
            raise DataInvariantError("round_budget", f"treat_week exceeds the {self.rounds} allocation rounds")
        budget = self.budget_per_round
        for r in range(1, self.rounds + 1):
            count = int(np.count_nonzero(weeks == r))
            if count != budget:
                raise DataInvariantError(
                    "round_budget", f"round {r} treats {count} agents, expected ceil(alpha * n) = {budget}"
                )

    @property
    def n(self) -> int:
        return self.policy_arm.n

    @property
    def budget_per_round(self) -> int:
        return budget_per_round(self.alpha, self.n)

    def budget(self, upto_round: Optional[int] = None) -> int:
        """Total treatments over the first upto_round rounds (all rounds by default)."""
        rounds = self.rounds if upto_round is None else upto_round
        return rounds * self.budget_per_round

    @property
    def covariate_dim(self) -> int:
        return self.policy_arm.covariate_dim

    def records(self) -> List[RctRecord]:
        """All records, policy arm first, each arm in stored order."""
        return list(self.policy_arm.records(Arm.POLICY)) + list(self.control_arm.records(Arm.CONTROL))

    @classmethod
    def from_records(
        cls,
        records: Sequence[RctRecord],
        alpha: float,
        rounds: int = 1,
        seed: int = -1,
    ) -> "RctDataset":
        """
        Build a dataset from row records of both arms.

        Raises:
            DataInvariantError: If an arm is empty or any dataset invariant fails
        """
        policy = [r for r in records if r.arm is Arm.POLICY]
        control = [r for r in records if r.arm is Arm.CONTROL]
        if not policy or not control:
            raise DataInvariantError("equal_arms", "both arms need at least one record")
        policy_arm = ArmTable.from_records(sorted(policy, key=lambda r: r.agent_id))
        control_arm = ArmTable.from_records(sorted(control, key=lambda r: r.agent_id))
        return cls(
            policy_arm=policy_arm,
            control_arm=control_arm,
            alpha=alpha,
            horizon=policy_arm.horizon,
            rounds=rounds,
            seed=seed,
        )


def _significant(value: Optional[float], digits: int) -> Optional[float]:
    if value is None:
        return None
    return float(f"{value:.{digits}g}")


@dataclass(frozen=True)
class EstimateReport:
    """
    Point estimate with optional variance, confidence interval and p-value.

    Attributes:
        estimator (EstimatorName): Which estimator produced the report
        point (float): Point estimate
        n (int): Agents per arm
        alpha (float): Per-round treatment fraction
        level (float): Confidence level of the interval
        variance (float, optional): Estimated asymptotic variance of sqrt(n) * point
        ci_low (float, optional): Lower interval endpoint
        ci_high (float, optional): Upper interval endpoint
        p_value (float, optional): One-sided p-value for a positive effect
        hybrid_weight (float, optional): Weight used by the hybrid estimator
        variance_method (str, optional): Variance estimator used
        variance_clamped (bool): Whether a negative variance was clamped to 0
        k_used (int, optional): Order-statistic window used by plug-in variances
        horizon (int, optional): Number of timesteps the rewards were summed over
    """
    estimator: EstimatorName
    point: float
    n: int
    alpha: float
    level: float = 0.95
    variance: Optional[float] = None
    ci_low: Optional[float] = None
    ci_high: Optional[float] = None
    p_value: Optional[float] = None
    hybrid_weight: Optional[float] = None
    variance_method: Optional[str] = None
    variance_clamped: bool = False
    k_used: Optional[int] = None
    horizon: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "estimator", EstimatorName(self.estimator))
        if not 0.0 < self.level < 1.0:
            raise ArgumentError(f"level must lie in (0, 1), got {self.level}")
        if self.variance is not None and self.variance < 0.0:
            raise DataInvariantError("variance_sign", "reported variances must be non-negative")
        if (self.ci_low is None) != (self.ci_high is None):
            raise DataInvariantError("interval", "both interval endpoints must be present or absent")
        if self.ci_low is not None:
            if not self.ci_low <= self.point <= self.ci_high:
                raise DataInvariantError("interval", "the interval must contain the point estimate")
            if abs((self.point - self.ci_low) - (self.ci_high - self.point)) > 1e-9 * max(1.0, abs(self.point)):
                raise DataInvariantError("interval", "intervals must be symmetric about the point estimate")
        if self.p_value is not None and not 0.0 <= self.p_value <= 1.0:
            raise DataInvariantError("p_value", "p-values must lie in [0, 1]")

    @property
    def has_interval(self) -> bool:
        return self.ci_low is not None

    @property
    def half_width(self) -> Optional[float]:
        if self.ci_low is None:
            return None
        return 0.5 * (self.ci_high - self.ci_low)

    def to_dict(self, digits: Optional[int] = None) -> Dict[str, Any]:
        """
        Serialise to plain JSON types.

        Args:
            digits: Significant digits for real numbers, full precision if None
        """
        def number(value):
            return value if digits is None else _significant(value, digits)

        return {
            "estimator": self.estimator.value,
            "point": number(self.point),
            "variance": number(self.variance),
            "ci_low": number(self.ci_low),
            "ci_high": number(self.ci_high),
            "level": self.level,
            "p_value": number(self.p_value),
            "n": self.n,
            "alpha": self.alpha,
            "hybrid_weight": number(self.hybrid_weight),
            "variance_method": self.variance_method,
            "variance_clamped": self.variance_clamped,
            "k_used": self.k_used,
            "horizon": self.horizon,
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "EstimateReport":
        return cls(**payload)


@dataclass(frozen=True)
class CoverageSummary:
    """
    Coverage tallies of one estimator over Monte-Carlo replicates.

    Attributes:
        estimator (str): Estimator name
        below (float): Fraction of intervals entirely below the estimand
        covered (float): Fraction of intervals containing the estimand
        above (float): Fraction of intervals entirely above the estimand
        mean_half_width (float): Mean interval half-width
        replicates (int): Replicates that produced an interval
        estimand (float): Monte-Carlo estimand the intervals were scored against
        failures (int): Replicates skipped after a numerical failure
        mean_point (float): Mean point estimate
        sweep_axis (str, optional): Swept parameter, for sweep rows
        sweep_value (float, optional): Value of the swept parameter
    """
    estimator: str
    below: float
    covered: float
    above: float
    mean_half_width: float
    replicates: int
    estimand: float
    failures: int = 0
    mean_point: float = float("nan")
    sweep_axis: Optional[str] = None
    sweep_value: Optional[float] = None

    def __post_init__(self):
        if self.replicates > 0 and abs(self.below + self.covered + self.above - 1.0) > 1e-9:
            raise DataInvariantError("coverage_fractions", "below + covered + above must equal 1")

    def to_row(self) -> Dict[str, Any]:
        row = {
            "estimator": self.estimator,
            "below": self.below,
            "covered": self.covered,
            "above": self.above,
            "mean_half_width": self.mean_half_width,
            "estimand": self.estimand,
            "replicates": self.replicates,
            "failures": self.failures,
            "mean_point": self.mean_point,
        }
        if self.sweep_axis is not None:
            row = {"sweep_axis": self.sweep_axis, "sweep_value": self.sweep_value, **row}
        return row
