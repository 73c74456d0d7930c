"""
Index Policy Evaluation Toolkit

Module: reporting.py

Runs one named estimator on a dataset and completes its report with the
configured variance estimate, interval and p-value. This is the single
entry point the command line and the experiment harness use, so both pick
variance methods the same way:

    base          base_knn (single round) or welch
    subgroup      sg_simple, sg_knn (single round) or welch
    threshold     welch when both groups hold at least 2 agents, else point only
    hybrid        hybrid plug-in variance at the weight used
    regression_*  OLS standard error, classical or robust
    mate_reshuffle  point only

Sequential datasets, and subgroup analyses restricted to the first rounds,
always use the welch variances.
"""

from dataclasses import dataclass, replace
from typing import Any, Dict, Optional, Union

from src.core.errors import ArgumentError, ConfigurationError, DegenerateDataError
from src.core.types import EstimateReport, EstimatorName, RctDataset, check_truncation
from src.estimators import (
    estimate_base,
    estimate_hybrid,
    estimate_mate_reshuffle,
    estimate_regression,
    estimate_subgroup,
    estimate_threshold,
    threshold_groups,
)
from src.inference.hybrid import hybrid_terms
from src.inference.intervals import confidence_interval, p_value_positive_effect
from src.inference.variance import (
    VarianceEstimate,
    VarianceMethod,
    clamp_variance,
    plug_in_moments,
    var_base_knn,
    var_sg_knn,
    var_sg_simple,
    welch_base_variance,
    welch_subgroup_variance,
    welch_two_sample_variance,
)
from src.utils.logger import LoggerType, get_logger


SUBGROUP_METHODS = ("sg_simple", "sg_knn", "welch")
BASE_METHODS = ("base_knn", "welch")
OLS_COVS = ("classical", "robust")


@dataclass(frozen=True)
class InferenceSettings:
    """
    How variances and intervals are computed.

    Attributes:
        level (float): Confidence level
        subgroup_variance (str): sg_simple, sg_knn or welch
        base_variance (str): base_knn or welch
        k (int, optional): Order-statistic window, automatic when None
        ols_cov (str): classical or robust regression standard errors
        hybrid_weight (float or str): Fixed hybrid weight or "auto"
    """
    level: float = 0.95
    subgroup_variance: str = "sg_simple"
    base_variance: str = "base_knn"
    k: Optional[int] = None
    ols_cov: str = "classical"
    hybrid_weight: Union[float, str] = "auto"

    def __post_init__(self):
        if not 0.0 < self.level < 1.0:
            raise ConfigurationError(f"level must lie in (0, 1), got {self.level}")
        if self.subgroup_variance not in SUBGROUP_METHODS:
            raise ConfigurationError(f"subgroup_variance must be one of {SUBGROUP_METHODS}")
        if self.base_variance not in BASE_METHODS:
            raise ConfigurationError(f"base_variance must be one of {BASE_METHODS}")
        if self.ols_cov not in OLS_COVS:
            raise ConfigurationError(f"ols_cov must be one of {OLS_COVS}")
        if isinstance(self.hybrid_weight, str) and self.hybrid_weight != "auto":
            raise ConfigurationError("hybrid_weight must be a number or 'auto'")

    @classmethod
    def from_config(cls, section: Dict[str, Any], level: float = 0.95) -> "InferenceSettings":
        return cls(level=level, **section)


def _is_sequential(data: RctDataset, upto_round: Optional[int]) -> bool:
    return data.rounds > 1 or (upto_round is not None and upto_round < data.rounds)


def _point_report(
    data: RctDataset,
    name: EstimatorName,
    settings: InferenceSettings,
    truncate_at: Optional[int],
    upto_round: Optional[int],
    weight: Union[float, str],
) -> EstimateReport:
    if name is EstimatorName.BASE:
        return estimate_base(data, truncate_at)
    if name is EstimatorName.SUBGROUP:
        return estimate_subgroup(data, upto_round, truncate_at)
    if name is EstimatorName.THRESHOLD:
        return estimate_threshold(data, truncate_at)
    if name is EstimatorName.HYBRID:
        return estimate_hybrid(data, weight=weight, k=settings.k, truncate_at=truncate_at)
    if name is EstimatorName.MATE_RESHUFFLE:
        return EstimateReport(
            estimator=name,
            point=estimate_mate_reshuffle(data, truncate_at),
            n=data.n,
            alpha=data.alpha,
            horizon=check_truncation(truncate_at, data.horizon),
        )
    kind = "base" if name is EstimatorName.REGRESSION_BASE else "subgroup"
    return estimate_regression(
        data, kind=kind, upto_round=None if kind == "base" else upto_round,
        truncate_at=truncate_at, cov=settings.ols_cov,
    )


def _variance(
    data: RctDataset,
    report: EstimateReport,
    settings: InferenceSettings,
    truncate_at: Optional[int],
    upto_round: Optional[int],
    weight: Union[float, str],
    logger: LoggerType,
) -> Optional[VarianceEstimate]:
    name = report.estimator
    sequential = _is_sequential(data, upto_round)

    if name is EstimatorName.BASE:
        if data.rounds > 1 or settings.base_variance == "welch":
            return welch_base_variance(data, truncate_at)
        return var_base_knn(data, settings.k, truncate_at, logger=logger)

    if name is EstimatorName.SUBGROUP:
        if sequential or settings.subgroup_variance == "welch":
            return welch_subgroup_variance(data, upto_round, truncate_at)
        if settings.subgroup_variance == "sg_knn":
            return var_sg_knn(data, settings.k, truncate_at, logger=logger)
        return var_sg_simple(data, truncate_at, logger=logger)

    if name is EstimatorName.THRESHOLD:
        treated, control = threshold_groups(data, truncate_at)
        try:
            return welch_two_sample_variance(treated, control, data.n)
        except DegenerateDataError as e:
            logger.warning(f"[!] Threshold estimate reported without an interval: {e}")
            return None

    if name is EstimatorName.HYBRID:
        moments = plug_in_moments(data, settings.k, truncate_at)
        terms = hybrid_terms(moments, require_positive=weight == "auto")
        raw = terms.variance(report.hybrid_weight)
        return clamp_variance(raw, VarianceMethod.HYB_KNN, k_used=terms.k_used, logger=logger)

    if name in (EstimatorName.REGRESSION_BASE, EstimatorName.REGRESSION_SUBGROUP):
        return VarianceEstimate(value=report.variance, method=report.variance_method)

    return None


def evaluate_estimator(
    data: RctDataset,
    name: Union[EstimatorName, str],
    settings: Optional[InferenceSettings] = None,
    truncate_at: Optional[int] = None,
    upto_round: Optional[int] = None,
    weight: Optional[Union[float, str]] = None,
    logger: Optional[LoggerType] = None,
) -> EstimateReport:
    """
    Point estimate, variance, interval and p-value of one estimator.

    Args:
        data: Trial dataset
        name: Estimator name
        settings: Variance and interval settings, defaults when omitted
        truncate_at: Optional number of leading timesteps summed
        upto_round: Subgroup and regression_subgroup only; first rounds analysed
        weight: Hybrid weight, overriding settings.hybrid_weight
        logger: Logger for warnings

    Returns:
        EstimateReport: Completed report; the interval and p-value are absent
            for point-only estimators, the p-value also when the variance is 0

    Raises:
        ArgumentError: If upto_round is given for an estimator that ignores it
        NumericalError: If the estimator or its variance is degenerate
    """
    if logger is None:
        logger = get_logger(name="inference")
    settings = settings or InferenceSettings()
    name = EstimatorName(name)
    if upto_round is not None and name not in (EstimatorName.SUBGROUP, EstimatorName.REGRESSION_SUBGROUP):
        raise ArgumentError(f"upto_round applies to subgroup estimators only, not '{name.value}'")
    keep = check_truncation(truncate_at, data.horizon)
    weight = settings.hybrid_weight if weight is None else weight

    report = _point_report(data, name, settings, keep, upto_round, weight)
    variance = _variance(data, report, settings, keep, upto_round, weight, logger)
    if variance is None:
        return replace(report, level=settings.level)

    low, high = confidence_interval(report.point, variance.value, data.n, settings.level)
    p_value = None
    if variance.value > 0.0:
        p_value = p_value_positive_effect(report.point, variance.value, data.n)
    else:
        logger.warning(f"[!] Zero {variance.method.value} variance for {name.value}; p-value omitted")

    return replace(
        report,
        level=settings.level,
        variance=variance.value,
        ci_low=low,
        ci_high=high,
        p_value=p_value,
        variance_method=variance.method.value,
        variance_clamped=variance.clamped,
        k_used=variance.k_used,
    )
