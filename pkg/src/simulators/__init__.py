from .config import SimulatorConfig, InitialState, BoostCenter
from .markov_chain import (
    initial_distribution,
    simulate_reward_paths,
    simulate_reward_path,
    expected_rewards,
    expected_reward,
)
from .base_sampler import BaseCohortSampler
from .synthetic import SyntheticSampler, sample_synthetic_cohort
from .tb_like import TbLikeSampler, default_passive_pool, sample_tb_like_cohort
from .mmitra_like import (
    MmitraLikeSampler,
    default_count_pool,
    population_prior,
    smoothed_transitions,
    sample_mmitra_like_cohort,
)
from .corner_case import CornerCaseSampler, boost_center, corner_case_cohort
from .rct import run_rct, make_sampler, simulate_trial
