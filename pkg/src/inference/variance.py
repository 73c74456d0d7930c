"""
Index Policy Evaluation Toolkit

Module: variance.py

Estimators of the asymptotic variance sigma^2 of sqrt(n) * (theta - tau) for
the base and subgroup estimators.

sg_simple
    Three-term estimator for the subgroup estimator. With S_p and S_c the
    treated and counterfactual reward sums and K = ceil(alpha * n):

        T1 = sum_treated (R - S_p/K)^2 / (alpha^2 (n - 1))
        T2 = sum_counterfactual (R - S_c/K)^2 / (alpha^2 (n - 1))
        T3 = (1 - alpha) n / (alpha (2n - 1) K^2) * (S_p - S_c)^2
        sigma^2 = T1 + T2 - T3

    T1 + T2 alone is the two-sample Welch variance.

sg_knn, base_knn
    Plug-in estimators. Moments are taken over the selected agents and
    divided by n (so they estimate E[R 1{selected}]), and the conditional
    mean of the reward at the alpha-quantile of the index is estimated by
    averaging the k + 1 selected rewards with the highest index ranks.

welch
    Two-sample variances used for sequential runs and the threshold estimator.

Negative estimates are clamped to 0 and flagged.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from src.core.errors import ArgumentError, DataInvariantError, DegenerateDataError
from src.core.types import RctDataset, check_truncation
from src.estimators.views import SubgroupView, build_subgroup_view, resolve_upto_round
from src.utils.logger import LoggerType, get_logger



class VarianceMethod(str, Enum):
    SG_SIMPLE = "sg_simple"
    SG_KNN = "sg_knn"
    BASE_KNN = "base_knn"
    WELCH = "welch"
    OLS_CLASSICAL = "ols_classical"
    OLS_ROBUST = "ols_robust"
    HYB_KNN = "hyb_knn"


@dataclass(frozen=True)
class VarianceEstimate:
    """
    Estimated asymptotic variance of sqrt(n) * theta.

    Attributes:
        value (float): Non-negative estimate
        method (VarianceMethod): Estimator that produced the value
        k_used (int, optional): Order-statistic window of plug-in estimators
        clamped (bool): Whether a negative raw value was clamped to 0
        raw (float): Value before clamping
    """
    value: float
    method: VarianceMethod
    k_used: Optional[int] = None
    clamped: bool = False
    raw: float = float("nan")

    def __post_init__(self):
        object.__setattr__(self, "method", VarianceMethod(self.method))
        if not self.value >= 0.0:
            raise DataInvariantError("variance_sign", f"variance estimates must be non-negative, got {self.value}")


def clamp_variance(
    raw: float,
    method: VarianceMethod,
    k_used: Optional[int] = None,
    logger: Optional[LoggerType] = None,
) -> VarianceEstimate:
    """Wrap a raw estimate, clamping negative values to 0 with a warning."""
    if raw >= 0.0:
        return VarianceEstimate(value=float(raw), method=method, k_used=k_used, raw=float(raw))
    if logger is None:
        logger = get_logger(name="inference")
    logger.warning(f"[!] Negative {VarianceMethod(method).value} variance {raw:.6g} clamped to 0")
    return VarianceEstimate(value=0.0, method=method, k_used=k_used, clamped=True, raw=float(raw))


def _require_single_round(data: RctDataset, method: str) -> None:
    if data.rounds != 1:
        raise ArgumentError(
            f"the {method} variance needs single-round allocation, got {data.rounds} rounds; use welch"
        )


def resolve_k(k: Optional[int], n: int, budget: int) -> int:
    """
    Order-statistic window, ceil(n^0.75) capped at budget - 1 when automatic.

    Raises:
        DegenerateDataError: If the budget is below 2, leaving no window
        ArgumentError: If an explicit k is outside [1, budget - 1]
    """
    if budget < 2:
        raise DegenerateDataError(f"a budget of {budget} leaves no order-statistic window")
    if k is None:
        return min(int(math.ceil(n ** 0.75)), budget - 1)
    if not 1 <= k <= budget - 1:
        raise ArgumentError(f"k must lie in [1, {budget - 1}], got {k}")
    return int(k)


def conditional_mean_at_quantile(sorted_selected_rewards: np.ndarray, k: int) -> float:
    """
    Mean of the k + 1 rewards with index ranks K - k .. K.

    Args:
        sorted_selected_rewards: Rewards of the K selected agents ordered by index
        k: Window size, in [1, K - 1]

    Returns:
        float: Estimate of E[R | index = q_alpha]

    Raises:
        ArgumentError: If k is out of range
    """
    rewards = np.asarray(sorted_selected_rewards, dtype=float)
    size = rewards.shape[0]
    if not 1 <= k <= size - 1:
        raise ArgumentError(f"k must lie in [1, {size - 1}], got {k}")
    return float(rewards[size - k - 1:].mean())


def _welch_terms(view: SubgroupView, scale: float, n: int) -> Tuple[float, float]:
    denominator = scale ** 2 * (n - 1)
    t1 = float(np.sum((view.treated_rewards - view.treated_sum / view.budget) ** 2)) / denominator
    t2 = float(np.sum((view.counterfactual_rewards - view.counterfactual_sum / view.budget) ** 2)) / denominator
    return t1, t2


def sg_simple_terms(data: RctDataset, truncate_at: Optional[int] = None) -> Tuple[float, float, float]:
    """
    The three terms (T1, T2, T3) of the sg_simple estimator.

    Raises:
        ArgumentError: If the dataset has more than one round
    """
    _require_single_round(data, "sg_simple")
    view = build_subgroup_view(data, 1, truncate_at)
    n, alpha, budget = data.n, data.alpha, view.budget
    t1, t2 = _welch_terms(view, alpha, n)
    t3 = (1.0 - alpha) * n / (alpha * (2 * n - 1) * budget ** 2) * (view.treated_sum - view.counterfactual_sum) ** 2
    return t1, t2, t3


def var_sg_simple(
    data: RctDataset,
    truncate_at: Optional[int] = None,
    logger: Optional[LoggerType] = None,
) -> VarianceEstimate:
    """
    Three-term variance of the subgroup estimator, T1 + T2 - T3.

    Args:
        data: Single-round trial dataset
        truncate_at: Optional number of leading timesteps summed
        logger: Logger for the clamping warning

    Returns:
        VarianceEstimate: Clamped at 0
    """
    t1, t2, t3 = sg_simple_terms(data, truncate_at)
    return clamp_variance((t1 + t2) - t3, VarianceMethod.SG_SIMPLE, logger=logger)


@dataclass(frozen=True)
class PlugInMoments:
    """
    Plug-in ingredients shared by the knn and hybrid variance estimators.

    Attributes:
        alpha (float): Treatment fraction
        k (int): Order-statistic window
        mu_t (float): Treated reward sum / n
        sigma2_t (float): Treated second moment / n minus mu_t^2
        mu_c (float): Counterfactual reward sum / n
        sigma2_c (float): Counterfactual second moment / n minus mu_c^2
        rho1 (float): Treated conditional mean at the quantile
        rho0 (float): Counterfactual conditional mean at the quantile
        mu0_check (float): Unselected control reward sum / n
        sigma2_0_check (float): Unselected control second moment / n minus mu0_check^2
        var_control (float): Variance of the whole control arm
    """
    alpha: float
    k: int
    mu_t: float
    sigma2_t: float
    mu_c: float
    sigma2_c: float
    rho1: float
    rho0: float
    mu0_check: float
    sigma2_0_check: float
    var_control: float


def _scaled_moments(rewards: np.ndarray, n: int) -> Tuple[float, float]:
    mean = float(rewards.sum()) / n
    return mean, float(np.sum(rewards ** 2)) / n - mean ** 2


def plug_in_moments(
    data: RctDataset,
    k: Optional[int] = None,
    truncate_at: Optional[int] = None,
) -> PlugInMoments:
    """
    Collect the plug-in moments of a single-round trial.

    Args:
        data: Single-round trial dataset
        k: Order-statistic window, automatic when omitted
        truncate_at: Optional number of leading timesteps summed

    Returns:
        PlugInMoments: The shared ingredients
    """
    _require_single_round(data, "plug-in")
    keep = check_truncation(truncate_at, data.horizon)
    view = build_subgroup_view(data, 1, keep)
    n = data.n
    window = resolve_k(k, n, view.budget)

    mu_t, sigma2_t = _scaled_moments(view.treated_rewards, n)
    mu_c, sigma2_c = _scaled_moments(view.counterfactual_rewards, n)
    control_totals = data.control_arm.totals(keep)
    mu0_check, sigma2_0_check = _scaled_moments(control_totals[~view.counterfactual_mask], n)

    return PlugInMoments(
        alpha=data.alpha,
        k=window,
        mu_t=mu_t,
        sigma2_t=sigma2_t,
        mu_c=mu_c,
        sigma2_c=sigma2_c,
        rho1=conditional_mean_at_quantile(view.treated_rewards, window),
        rho0=conditional_mean_at_quantile(view.counterfactual_rewards, window),
        mu0_check=mu0_check,
        sigma2_0_check=sigma2_0_check,
        var_control=float(np.var(control_totals)),
    )


def sg_knn_value(m: PlugInMoments) -> float:
    """Raw plug-in variance of the subgroup estimator."""
    a = m.alpha
    bracket = (
        a * (1.0 - a) * (m.rho1 ** 2 + m.rho0 ** 2)
        - 2.0 * (1.0 - a) * (m.rho1 * m.mu_t + m.rho0 * m.mu_c)
        + m.sigma2_t
        + m.sigma2_c
    )
    return bracket / a ** 2


def base_knn_value(m: PlugInMoments) -> float:
    """Raw plug-in variance of the base estimator."""
    a = m.alpha
    gap = m.rho1 - m.rho0
    bracket = (
        a * (1.0 - a) * gap ** 2
        + (2.0 * a * m.mu0_check - 2.0 * (1.0 - a) * m.mu_t) * gap
        + m.sigma2_t
        + m.sigma2_0_check
        - 2.0 * m.mu0_check * m.mu_t
        + m.var_control
    )
    return bracket / a ** 2


def var_sg_knn(
    data: RctDataset,
    k: Optional[int] = None,
    truncate_at: Optional[int] = None,
    logger: Optional[LoggerType] = None,
) -> VarianceEstimate:
    """Plug-in variance of the subgroup estimator."""
    moments = plug_in_moments(data, k, truncate_at)
    return clamp_variance(sg_knn_value(moments), VarianceMethod.SG_KNN, k_used=moments.k, logger=logger)


def var_base_knn(
    data: RctDataset,
    k: Optional[int] = None,
    truncate_at: Optional[int] = None,
    logger: Optional[LoggerType] = None,
) -> VarianceEstimate:
    """
    Plug-in variance of the base estimator.

    Args:
        data: Single-round trial dataset
        k: Order-statistic window, ceil(n^0.75) capped at budget - 1 when omitted
        truncate_at: Optional number of leading timesteps summed
        logger: Logger for the clamping warning

    Returns:
        VarianceEstimate: Clamped at 0

    Raises:
        ArgumentError: If the dataset has more than one round or k is out of range
        DegenerateDataError: If the budget leaves no order-statistic window
    """
    moments = plug_in_moments(data, k, truncate_at)
    return clamp_variance(base_knn_value(moments), VarianceMethod.BASE_KNN, k_used=moments.k, logger=logger)


def welch_base_variance(data: RctDataset, truncate_at: Optional[int] = None) -> VarianceEstimate:
    """
    Two-sample variance of the base estimator, (n / budget)^2 (s_p^2 + s_c^2).

    Valid for any number of rounds.
    """
    keep = check_truncation(truncate_at, data.horizon)
    s_p = float(np.var(data.policy_arm.totals(keep), ddof=1))
    s_c = float(np.var(data.control_arm.totals(keep), ddof=1))
    scale = data.n / data.budget()
    return VarianceEstimate(value=scale ** 2 * (s_p + s_c), method=VarianceMethod.WELCH)


def welch_subgroup_variance(
    data: RctDataset,
    upto_round: Optional[int] = None,
    truncate_at: Optional[int] = None,
) -> VarianceEstimate:
    """
    Two-sample variance of the subgroup estimator: the first two sg_simple
    terms, with alpha replaced by alpha * upto_round in sequential runs.

    Raises:
        DegenerateDataError: If a subgroup holds fewer than 2 agents
    """
    upto = resolve_upto_round(data, upto_round)
    view = build_subgroup_view(data, upto, truncate_at)
    if view.budget < 2:
        raise DegenerateDataError("the Welch variance needs at least 2 agents per subgroup")
    t1, t2 = _welch_terms(view, data.alpha * upto, data.n)
    return VarianceEstimate(value=t1 + t2, method=VarianceMethod.WELCH)


def welch_two_sample_variance(first: np.ndarray, second: np.ndarray, n: int) -> VarianceEstimate:
    """
    n * (s_1^2 / |first| + s_2^2 / |second|), the variance of sqrt(n) times a
    difference of two independent group means.

    Raises:
        DegenerateDataError: If a group holds fewer than 2 values
    """
    if first.shape[0] < 2 or second.shape[0] < 2:
        raise DegenerateDataError("the Welch variance needs at least 2 agents per group")
    value = n * (np.var(first, ddof=1) / first.shape[0] + np.var(second, ddof=1) / second.shape[0])
    return VarianceEstimate(value=float(value), method=VarianceMethod.WELCH)
