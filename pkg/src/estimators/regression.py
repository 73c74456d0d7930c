"""
Index Policy Evaluation Toolkit

Module: regression.py

Covariate-adjusted estimators. The total reward is regressed on an
intercept, a treatment indicator and the agents' covariates,

    R_i = k + beta * J_i + sum_t gamma_t * x_{i,t}

and beta is the effect estimate. For kind="subgroup" the sample is the union
of the treated policy-arm agents and the counterfactually selected control
agents, with J the treated indicator. For kind="base" the sample is both
arms in full and J is arm membership, so beta estimates the per-agent
difference of the arm means. It is not rescaled: without covariates it equals
budget / n times the base estimator.

The design is checked with a column-pivoted QR factorisation before fitting
so rank deficiency is reported with the offending column names.
"""

from typing import List, Optional, Tuple

import numpy as np
import pandas as pd
import statsmodels.api as sm
from scipy.linalg import qr

from src.core.errors import ArgumentError, RankDeficiencyError
from src.core.types import EstimateReport, EstimatorName, RctDataset, check_truncation
from src.estimators.views import build_subgroup_view

# Relative tolerance on |R_ii| / |R_00| of the pivoted QR factor
RANK_TOL = 1e-10

COV_TYPES = {"classical": "nonrobust", "robust": "HC1"}


def design_rank_check(design: pd.DataFrame, tol: float = RANK_TOL) -> None:
    """
    Raise if the design matrix is rank deficient.

    Args:
        design: Regressors with named columns
        tol: Relative tolerance on the diagonal of the pivoted R factor

    Raises:
        RankDeficiencyError: Naming the columns the pivoting pushed past the rank
    """
    matrix = design.to_numpy(dtype=float)
    _, r, pivots = qr(matrix, mode="economic", pivoting=True)
    diagonal = np.abs(np.diag(r))
    if diagonal.size == 0 or diagonal[0] == 0.0:
        raise RankDeficiencyError(list(design.columns))
    rank = int(np.count_nonzero(diagonal > tol * diagonal[0]))
    if rank < matrix.shape[1]:
        raise RankDeficiencyError([str(design.columns[p]) for p in pivots[rank:]])


def fit_treatment_coefficient(
    rewards: np.ndarray,
    treatment: np.ndarray,
    covariates: np.ndarray,
    cov: str = "classical",
    treatment_name: str = "treated",
) -> Tuple[float, float]:
    """
    OLS fit of rewards on an intercept, the treatment indicator and covariates.

    Args:
        rewards: Outcome per observation
        treatment: 0/1 indicator per observation
        covariates: Matrix (observations, m), m may be 0
        cov: "classical" or "robust" (HC1) standard errors
        treatment_name: Column name of the indicator

    Returns:
        tuple: (coefficient, standard error) of the indicator

    Raises:
        ArgumentError: If cov is unknown
        RankDeficiencyError: If the design is rank deficient
    """
    if cov not in COV_TYPES:
        raise ArgumentError(f"ols_cov must be one of {sorted(COV_TYPES)}, got '{cov}'")
    columns: List[str] = [f"covariate_{j}" for j in range(covariates.shape[1])]
    design = pd.DataFrame(covariates, columns=columns)
    design.insert(0, treatment_name, np.asarray(treatment, dtype=float))
    design = sm.add_constant(design, prepend=True, has_constant="add")
    design_rank_check(design)

    results = sm.OLS(np.asarray(rewards, dtype=float), design).fit(cov_type=COV_TYPES[cov])
    return float(results.params[treatment_name]), float(results.bse[treatment_name])


def estimate_regression(
    data: RctDataset,
    kind: str = "subgroup",
    upto_round: Optional[int] = None,
    truncate_at: Optional[int] = None,
    cov: str = "classical",
) -> EstimateReport:
    """
    Covariate-adjusted base or subgroup estimate.

    Args:
        data: Trial dataset
        kind: "subgroup" or "base"
        upto_round: Subgroup only; rounds 1..upto_round, all rounds when omitted
        truncate_at: Optional number of leading timesteps summed
        cov: "classical" or "robust" standard errors

    Returns:
        EstimateReport: Point beta and variance n * se^2;
            the interval is attached by the inference package

    Raises:
        ArgumentError: If kind or cov is unknown
        RankDeficiencyError: If the design is rank deficient
    """
    keep = check_truncation(truncate_at, data.horizon)
    policy, control = data.policy_arm, data.control_arm

    if kind == "subgroup":
        view = build_subgroup_view(data, upto_round, keep)
        rewards = np.concatenate([policy.totals(keep)[view.treated_mask], control.totals(keep)[view.counterfactual_mask]])
        treatment = np.concatenate([np.ones(view.budget), np.zeros(view.budget)])
        covariates = np.vstack([policy.covariates[view.treated_mask], control.covariates[view.counterfactual_mask]])
        beta, se = fit_treatment_coefficient(rewards, treatment, covariates, cov=cov, treatment_name="treated")
        name = EstimatorName.REGRESSION_SUBGROUP
    elif kind == "base":
        rewards = np.concatenate([policy.totals(keep), control.totals(keep)])
        treatment = np.concatenate([np.ones(data.n), np.zeros(data.n)])
        covariates = np.vstack([policy.covariates, control.covariates])
        beta, se = fit_treatment_coefficient(rewards, treatment, covariates, cov=cov, treatment_name="arm")
        name = EstimatorName.REGRESSION_BASE
    else:
        raise ArgumentError(f"regression kind must be 'base' or 'subgroup', got '{kind}'")

    return EstimateReport(
        estimator=name,
        point=beta,
        n=data.n,
        alpha=data.alpha,
        variance=data.n * se ** 2,
        variance_method=f"ols_{cov}",
        horizon=keep,
    )
