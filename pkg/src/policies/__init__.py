from .allocation import AllocationResult, allocate, allocate_rounds, threshold_select
from .whittle import optimal_values, q_value_gap, whittle_indices, whittle_index
from .indices import compute_indices, index_cohort
