# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.smooth.kernel** evaluates the spatial covariance
``C(r) = σ²(1 + r/ρ)·exp(-r/ρ)``.
"""

import numpy as np
import numpy.typing as npt

from avm_flow.base.error import ParameterError


def kernel(r: npt.ArrayLike, rho: float, sigma_x2: float = 1.0):
    """
    :param r: Lag distance(s), km, non-negative.
    :param rho: Range, km.
    :param sigma_x2: Marginal variance.
    :returns: Covariance, scalar for scalar input.
    """

    if not rho > 0:
        raise ParameterError(f"kernel range must be positive, got {rho}")
    if not sigma_x2 > 0:
        raise ParameterError(f"kernel variance must be positive, got {sigma_x2}")

    lag = np.asarray(r, dtype=float)
    if np.any(lag < 0):
        raise ParameterError("kernel lag must be non-negative")

    scaled = lag / rho
    value = sigma_x2 * (1.0 + scaled) * np.exp(-scaled)
    return float(value) if value.ndim == 0 else value
