"""
Index Policy Evaluation Toolkit

Module: hybrid.py

Variance of the hybrid estimator (1 - w) * subgroup + w * base as a function
of the weight, sigma^2(w) = (w^2 A + w B + C) / alpha^2, and its minimiser
w* = -B / (2A). A, B and C are assembled from the same plug-in moments as
the knn variance estimators, so sigma^2(0) reproduces the subgroup plug-in
variance and sigma^2(1) the base plug-in variance.
"""

from dataclasses import dataclass
from typing import Optional

from src.core.errors import DegenerateVarianceError
from src.core.types import RctDataset
from src.inference.variance import PlugInMoments, plug_in_moments


@dataclass(frozen=True)
class HybridWeightTerms:
    """
    Coefficients of the hybrid variance parabola.

    Attributes:
        A (float): Curvature, positive for a well-posed weight
        B (float): Linear coefficient
        C (float): Constant, alpha^2 times the subgroup plug-in variance
        w_star (float): Variance-minimising weight -B / (2A)
        alpha (float): Treatment fraction
        k_used (int): Order-statistic window of the plug-ins
    """
    A: float
    B: float
    C: float
    w_star: float
    alpha: float
    k_used: int

    def variance(self, w: float) -> float:
        """Raw sigma^2(w); may be negative in finite samples."""
        return hybrid_variance(self, w, self.alpha)

    @property
    def min_variance(self) -> float:
        """sigma^2(w*) = (C - B^2 / (4A)) / alpha^2."""
        return (self.C - self.B ** 2 / (4.0 * self.A)) / self.alpha ** 2


def hybrid_terms(m: PlugInMoments, require_positive: bool = True) -> HybridWeightTerms:
    """
    A, B, C and w* from plug-in moments.

    Args:
        m: Plug-in moments
        require_positive: Reject a non-positive curvature; a fixed weight only
            needs the parabola, not its vertex

    Raises:
        DegenerateVarianceError: If A <= 0 and require_positive is set
    """
    a = m.alpha
    mu_sum = m.mu_t + m.mu_c
    A = 2.0 * a * (1.0 - a) * m.rho0 ** 2 + 2.0 * m.sigma2_0_check - 4.0 * a * m.rho0 * m.mu0_check
    B = (
        -2.0 * mu_sum * m.mu0_check
        + 2.0 * mu_sum * m.rho0 * (1.0 - a)
        + 2.0 * a * m.mu0_check * (m.rho1 + m.rho0)
        - 2.0 * a * (1.0 - a) * m.rho0 * (m.rho1 + m.rho0)
    )
    C = (
        m.sigma2_t
        + m.sigma2_c
        - 2.0 * (1.0 - a) * (m.rho1 * m.mu_t + m.rho0 * m.mu_c)
        + a * (1.0 - a) * (m.rho1 ** 2 + m.rho0 ** 2)
    )
    if not A > 0.0:
        if require_positive:
            raise DegenerateVarianceError(f"hybrid curvature A = {A:.6g} is not positive; no optimal weight exists")
        w_star = float("nan")
    else:
        w_star = -B / (2.0 * A)
    return HybridWeightTerms(A=A, B=B, C=C, w_star=w_star, alpha=a, k_used=m.k)


def hybrid_optimal_weight(
    data: RctDataset,
    k: Optional[int] = None,
    truncate_at: Optional[int] = None,
) -> HybridWeightTerms:
    """
    Estimate the hybrid variance parabola and its optimal weight.

    Args:
        data: Single-round trial dataset
        k: Order-statistic window, automatic when omitted
        truncate_at: Optional number of leading timesteps summed

    Returns:
        HybridWeightTerms: Coefficients and w*

    Raises:
        DegenerateVarianceError: If the estimated curvature A is not positive
    """
    return hybrid_terms(plug_in_moments(data, k, truncate_at))


def hybrid_variance(terms: HybridWeightTerms, w: float, alpha: float) -> float:
    """(w^2 A + w B + C) / alpha^2, unclamped."""
    return (w * w * terms.A + w * terms.B + terms.C) / alpha ** 2
