from .normal import normal_cdf, normal_sf, normal_quantile, two_sided_critical_value
from .variance import (
    VarianceMethod,
    VarianceEstimate,
    PlugInMoments,
    clamp_variance,
    resolve_k,
    conditional_mean_at_quantile,
    sg_simple_terms,
    var_sg_simple,
    plug_in_moments,
    var_sg_knn,
    var_base_knn,
    welch_base_variance,
    welch_subgroup_variance,
    welch_two_sample_variance,
)
from .intervals import confidence_interval, p_value_positive_effect, compare_policies, welch_interval
from .hybrid import HybridWeightTerms, hybrid_terms, hybrid_optimal_weight, hybrid_variance
from .reporting import InferenceSettings, evaluate_estimator
