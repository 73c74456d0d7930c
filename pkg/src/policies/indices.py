"""
Index Policy Evaluation Toolkit

Module: indices.py

Computes the index column of a cohort for each supported index kind:
Whittle indices from the agents' transition models, i.i.d. uniform random
indices, or a pass-through covariate column.
"""

import numpy as np

from src.core.errors import ArgumentError
from src.core.types import AgentCohort, IndexKind, PolicySpec
from src.policies.whittle import whittle_indices


def compute_indices(cohort: AgentCohort, spec: PolicySpec, rng: np.random.Generator) -> np.ndarray:
    """
    Index value per agent of a cohort.

    Args:
        cohort: Agents to score
        spec: Policy whose index kind and Whittle settings apply
        rng: Generator used by the random kind only

    Returns:
        np.ndarray: One index per agent, lower means treated first

    Raises:
        ArgumentError: If the cohort lacks what the index kind needs
    """
    if spec.index_kind is IndexKind.WHITTLE:
        if cohort.transitions is None:
            raise ArgumentError("Whittle indices need transition models; use a custom_column index instead")
        return whittle_indices(
            cohort.transitions,
            discount=spec.discount,
            state=spec.evaluation_state,
            tol=spec.whittle_tol,
        )

    if spec.index_kind is IndexKind.RANDOM:
        return rng.random(len(cohort))

    if not 0 <= spec.custom_column < cohort.covariate_dim:
        raise ArgumentError(
            f"custom_column {spec.custom_column} is out of range for {cohort.covariate_dim} covariates"
        )
    return np.array(cohort.covariates[:, spec.custom_column], dtype=float)


def index_cohort(cohort: AgentCohort, spec: PolicySpec, rng: np.random.Generator) -> AgentCohort:
    """Copy of the cohort with its index column computed under the policy."""
    return cohort.with_indices(compute_indices(cohort, spec, rng))
