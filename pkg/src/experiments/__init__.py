from .plan import ExperimentPlan, SWEEP_AXES, plan_from_config, resolve_pool
from .runner import ReplicateRunner, default_workers, spawn_seeds
from .estimand import cohort_effect, monte_carlo_estimand
from .coverage import ReplicateOutcome, run_replicate, summarize, coverage_experiment, sweep
from .corner_case import CornerCaseResult, corner_case_study
