from .views import SubgroupView, build_subgroup_view, resolve_upto_round
from .difference import estimate_base, estimate_subgroup
from .threshold import boundary_index, threshold_groups, estimate_threshold, estimate_mate_reshuffle
from .hybrid import estimate_hybrid
from .regression import design_rank_check, fit_treatment_coefficient, estimate_regression
