"""
Index Policy Evaluation Toolkit

Module: plan.py

Typed experiment plans built from the configuration dictionary, and the
application of one sweep grid value to a plan.
"""

from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional, Sequence, Tuple

from src.core.errors import ArgumentError, ConfigurationError
from src.core.types import DomainTag, EstimatorName, PolicySpec, check_truncation
from src.inference.reporting import InferenceSettings
from src.simulators.config import SimulatorConfig
from src.simulators.mmitra_like import default_count_pool
from src.simulators.rct import make_sampler
from src.simulators.tb_like import default_passive_pool
from src.utils.logger import LoggerType, get_logger


SWEEP_AXES = ("alpha", "n", "horizon", "effect_cap", "level", "rounds", "truncate_at", "upto_round")
INTEGER_AXES = ("n", "horizon", "rounds", "truncate_at", "upto_round")
SUBGROUP_ONLY = (EstimatorName.SUBGROUP, EstimatorName.REGRESSION_SUBGROUP)


@dataclass(frozen=True, eq=False)
class ExperimentPlan:
    """
    Everything a coverage experiment needs.

    Attributes:
        simulator (SimulatorConfig): Cohort generator settings
        policy (PolicySpec): Allocation policy under evaluation
        replicates (int): Monte-Carlo trials
        estimators (tuple): Estimators scored in every trial
        level (float): Confidence level
        truncate_at (int, optional): Leading timesteps summed
        upto_round (int, optional): Subgroup analyses over the first rounds only
        estimand_reps (int): Cohorts averaged by the estimand oracle
        seed (int): Root seed
        inference (InferenceSettings): Variance settings
        sweep_axis (str, optional): Swept parameter
        sweep_values (tuple): Grid of the swept parameter
        fixed_total_budget (bool): Rounds sweeps divide alpha by the rounds
        pool (tuple, optional): Transition or count-table pool for tb/mmitra
    """
    simulator: SimulatorConfig
    policy: PolicySpec
    replicates: int = 500
    estimators: Tuple[EstimatorName, ...] = (EstimatorName.BASE, EstimatorName.SUBGROUP)
    level: float = 0.95
    truncate_at: Optional[int] = None
    upto_round: Optional[int] = None
    estimand_reps: int = 1000
    seed: int = 0
    inference: InferenceSettings = field(default_factory=InferenceSettings)
    sweep_axis: Optional[str] = None
    sweep_values: Tuple[float, ...] = ()
    fixed_total_budget: bool = True
    pool: Optional[Tuple[Any, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "estimators", tuple(EstimatorName(e) for e in self.estimators))
        if self.replicates < 1:
            raise ConfigurationError(f"replicates must be at least 1, got {self.replicates}")
        if self.estimand_reps < 1:
            raise ConfigurationError(f"estimand_reps must be at least 1, got {self.estimand_reps}")
        if not self.estimators:
            raise ConfigurationError("at least one estimator is required")
        if EstimatorName.MATE_RESHUFFLE in self.estimators:
            raise ConfigurationError("mate_reshuffle has no confidence interval and cannot be scored for coverage")
        if self.inference.level != self.level:
            object.__setattr__(self, "inference", replace(self.inference, level=self.level))
        try:
            self.policy.check_capacity(self.simulator.n)
            check_truncation(self.truncate_at, self.simulator.horizon)
        except ArgumentError as e:
            raise ConfigurationError(str(e)) from e
        if self.policy.rounds > self.simulator.horizon:
            raise ConfigurationError(
                f"{self.policy.rounds} allocation rounds do not fit in a horizon of {self.simulator.horizon}"
            )
        if self.upto_round is not None:
            if not 1 <= self.upto_round <= self.policy.rounds:
                raise ConfigurationError(f"upto_round must lie in [1, {self.policy.rounds}], got {self.upto_round}")
            others = [e.value for e in self.estimators if e not in SUBGROUP_ONLY]
            if others:
                raise ConfigurationError(f"upto_round applies to subgroup estimators only, not {others}")
        if self.sweep_axis is not None:
            if self.sweep_axis not in SWEEP_AXES:
                raise ConfigurationError(f"sweep axis must be one of {SWEEP_AXES}, got '{self.sweep_axis}'")
            if not self.sweep_values:
                raise ConfigurationError("a sweep needs at least one grid value")
            for value in self.sweep_values:
                self.with_value(self.sweep_axis, value)

    @property
    def horizon(self) -> int:
        return self.simulator.horizon

    @property
    def treated_fraction(self) -> float:
        """Share of an arm treated over all rounds, budget / n."""
        return self.policy.rounds * self.policy.budget(self.simulator.n) / self.simulator.n

    @property
    def is_corner_case(self) -> bool:
        return self.simulator.domain_tag is DomainTag.CORNER_CASE

    def sampler(self, logger: Optional[LoggerType] = None):
        return make_sampler(self.simulator, self.policy, self.pool, logger=logger)

    def with_value(self, axis: str, value: float) -> "ExperimentPlan":
        """
        Copy of the plan with one parameter set to a grid value.

        For the rounds axis with fixed_total_budget, alpha is divided by the
        number of rounds so the total number of treatments stays fixed.

        Raises:
            ConfigurationError: If the axis is unknown or the value invalid
        """
        if axis not in SWEEP_AXES:
            raise ConfigurationError(f"sweep axis must be one of {SWEEP_AXES}, got '{axis}'")
        if axis in INTEGER_AXES:
            if float(value) != int(value):
                raise ConfigurationError(f"{axis} values must be integers, got {value}")
            value = int(value)
        changes: Dict[str, Any] = {"sweep_axis": None, "sweep_values": ()}
        try:
            if axis == "alpha":
                changes["policy"] = replace(self.policy, alpha=float(value))
            elif axis == "rounds":
                alpha = self.policy.alpha / value if self.fixed_total_budget else self.policy.alpha
                changes["policy"] = replace(self.policy, rounds=value, alpha=alpha)
            elif axis in ("n", "horizon", "effect_cap"):
                changes["simulator"] = replace(self.simulator, **{axis: value})
            elif axis == "level":
                changes["level"] = float(value)
            else:
                changes[axis] = value
            return replace(self, **changes)
        except ArgumentError as e:
            raise ConfigurationError(f"invalid {axis} value {value}: {e}") from e


def resolve_pool(simulator: SimulatorConfig, logger: Optional[LoggerType] = None) -> Optional[Tuple[Any, ...]]:
    """
    Pool for the tb and mmitra domains: the configured file, else the bundled stand-in.
    """
    if simulator.domain_tag not in (DomainTag.TB, DomainTag.MMITRA):
        return None
    if logger is None:
        logger = get_logger(name="experiments")

    if simulator.pool_path:
        from src.utils.io import ingest_count_tables_csv, ingest_transitions_csv
        reader = ingest_transitions_csv if simulator.domain_tag is DomainTag.TB else ingest_count_tables_csv
        pool = reader(simulator.pool_path, logger=logger)
        logger.info(f"[+] Loaded a pool of {len(pool)} entries from {simulator.pool_path}")
        return tuple(pool)
    logger.info(f"[+] Using the bundled {simulator.domain_tag.value} pool ({simulator.pool_size} entries)")
    if simulator.domain_tag is DomainTag.TB:
        return tuple(default_passive_pool(simulator.pool_size))
    return tuple(default_count_pool(simulator.pool_size))


def simulator_from_config(config: Dict[str, Any]) -> SimulatorConfig:
    section = dict(config["simulator"])
    section["domain_tag"] = section.pop("domain")
    try:
        return SimulatorConfig(seed=config["experiment"]["seed"], **section)
    except (ArgumentError, ValueError) as e:
        raise ConfigurationError(f"invalid simulator settings: {e}") from e


def policy_from_config(config: Dict[str, Any]) -> PolicySpec:
    try:
        return PolicySpec(**config["policy"])
    except (ArgumentError, ValueError) as e:
        raise ConfigurationError(f"invalid policy settings: {e}") from e


def plan_from_config(
    config: Dict[str, Any],
    pool: Optional[Sequence[Any]] = None,
    logger: Optional[LoggerType] = None,
) -> ExperimentPlan:
    """
    Build an ExperimentPlan from a validated configuration dictionary.

    Args:
        config: Configuration with the DEFAULT_CONFIG layout
        pool: Pre-loaded pool; resolved from the configuration when omitted
        logger: Logger for status messages

    Returns:
        ExperimentPlan: The typed plan

    Raises:
        ConfigurationError: If any setting is invalid
    """
    simulator = simulator_from_config(config)
    policy = policy_from_config(config)
    experiment = config["experiment"]
    try:
        estimators = tuple(EstimatorName(e) for e in experiment["estimators"])
    except ValueError as e:
        raise ConfigurationError(f"unknown estimator: {e}") from e

    sweep = experiment.get("sweep") or {}
    if sweep and set(sweep) != {"axis", "values"}:
        raise ConfigurationError("experiment.sweep needs exactly the keys 'axis' and 'values'")

    return ExperimentPlan(
        simulator=simulator,
        policy=policy,
        replicates=experiment["replicates"],
        estimators=estimators,
        level=experiment["level"],
        truncate_at=experiment["truncate_at"],
        upto_round=experiment["upto_round"],
        estimand_reps=experiment["estimand_reps"],
        seed=experiment["seed"],
        inference=InferenceSettings.from_config(config["inference"], level=experiment["level"]),
        sweep_axis=sweep.get("axis"),
        sweep_values=tuple(sweep.get("values", ())),
        fixed_total_budget=experiment["fixed_total_budget"],
        pool=tuple(pool) if pool is not None else resolve_pool(simulator, logger),
    )
