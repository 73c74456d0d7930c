"""
Index Policy Evaluation Toolkit

Module: normal.py

Standard normal distribution functions on top of scipy.special.
"""

from typing import Union

import numpy as np
from scipy.special import ndtr, ndtri

from src.core.errors import ArgumentError

ArrayLike = Union[float, np.ndarray]


def normal_cdf(x: ArrayLike) -> ArrayLike:
    """Phi(x)."""
    result = ndtr(x)
    return float(result) if np.ndim(result) == 0 else result


def normal_sf(x: ArrayLike) -> ArrayLike:
    """1 - Phi(x), evaluated as Phi(-x) to keep tail accuracy."""
    return normal_cdf(-np.asarray(x, dtype=float))


def normal_quantile(p: ArrayLike) -> ArrayLike:
    """
    Inverse of Phi.

    Raises:
        ArgumentError: If any p lies outside the open interval (0, 1)
    """
    values = np.asarray(p, dtype=float)
    if not np.all((values > 0.0) & (values < 1.0)):
        raise ArgumentError(f"normal_quantile needs p in (0, 1), got {p}")
    result = ndtri(values)
    return float(result) if np.ndim(result) == 0 else result


def two_sided_critical_value(level: float) -> float:
    """
    Z_{1 - beta/2} for a two-sided interval of the given confidence level.

    Raises:
        ArgumentError: If level is outside (0, 1)
    """
    if not 0.0 < level < 1.0:
        raise ArgumentError(f"level must lie in (0, 1), got {level}")
    return float(normal_quantile(1.0 - (1.0 - level) / 2.0))
