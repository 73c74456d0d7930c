"""
Index Policy Evaluation Toolkit

Module: estimand.py

Monte-Carlo oracle for the per-treatment effect of a policy. Each estimand
cohort is allocated by the policy exactly as a policy arm would be, and the
difference in expected total reward between the agent's actual treatment
round and never treating it is computed analytically, then averaged over the
treated agents. The oracle is the mean over estimand_reps cohorts.

Truncated plans sum expected rewards over the truncated horizon only, and
treatments after the truncation point contribute no effect. Plans restricted
to the first rounds average over the agents treated in those rounds.
"""

from typing import Optional, Tuple

import numpy as np

from src.core.types import check_truncation
from src.experiments.plan import ExperimentPlan
from src.experiments.runner import ReplicateRunner, spawn_seeds
from src.policies.allocation import allocate_rounds
from src.simulators.markov_chain import expected_rewards
from src.utils.logger import LoggerType, get_logger



def cohort_effect(plan: ExperimentPlan, rng: np.random.Generator) -> float:
    """
    Average analytic treatment effect over the agents one cohort treats.

    Args:
        plan: Experiment plan
        rng: Random generator for the cohort

    Returns:
        float: Mean of E[R(treat_week)] - E[R(0)] over treated agents
    """
    cohort = plan.sampler().sample(rng)
    policy = plan.policy
    allocation = allocate_rounds(cohort.indices, policy.alpha, policy.rounds, agent_ids=cohort.ids)
    weeks = allocation.treat_weeks(cohort.ids)

    upto = policy.rounds if plan.upto_round is None else plan.upto_round
    counted = (weeks >= 1) & (weeks <= upto)
    keep = check_truncation(plan.truncate_at, plan.horizon)
    weeks = np.where(counted & (weeks <= keep), weeks, 0)

    transitions = cohort.transitions[counted]
    treated = expected_rewards(transitions, weeks[counted], keep, plan.simulator.initial_state)
    untreated = expected_rewards(transitions, 0, keep, plan.simulator.initial_state)
    return float(np.mean(treated - untreated))


def _estimand_task(args: Tuple[ExperimentPlan, np.random.SeedSequence]) -> float:
    plan, seed = args
    return cohort_effect(plan, np.random.default_rng(seed))


def monte_carlo_estimand(
    plan: ExperimentPlan,
    runner: Optional[ReplicateRunner] = None,
    logger: Optional[LoggerType] = None,
) -> float:
    """
    Policy estimand as the mean analytic effect over estimand_reps cohorts.

    Args:
        plan: Experiment plan
        runner: Replicate runner, a default one when omitted
        logger: Logger for status messages

    Returns:
        float: The estimand; exactly 1 for corner-case plans
    """
    if logger is None:
        logger = get_logger(name="experiments")
    if plan.is_corner_case:
        return 1.0

    runner = runner or ReplicateRunner(logger=logger)
    seeds = spawn_seeds(plan.seed, plan.estimand_reps, stream=0)
    effects = runner.map(_estimand_task, [(plan, seed) for seed in seeds], desc="Estimand")
    estimand = float(np.mean(effects))
    standard_error = float(np.std(effects, ddof=1) / np.sqrt(len(effects))) if len(effects) > 1 else 0.0
    logger.info(f"[+] Estimand {estimand:.6f} (MC standard error {standard_error:.2e}, {len(effects)} cohorts)")
    return estimand
