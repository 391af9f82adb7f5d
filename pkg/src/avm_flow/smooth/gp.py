# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.smooth.gp** builds the low-rank Gaussian-process location
smooth: kernel evaluations between points and a fixed set of knots form the
basis, the kernel Gram matrix of the knots is the penalty.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import numpy.typing as npt
from scipy.spatial import distance

from avm_flow.base.error import ParameterError
from avm_flow.smooth.kernel import kernel

#: Diagonal jitter added to the penalty, relative to its mean diagonal.
JITTER = 1e-8


@dataclass(frozen=True)
class GPTerm:
    knots: np.ndarray = field(repr=False)
    rho: float
    sigma_x2: float
    basis: np.ndarray = field(repr=False)
    penalty: np.ndarray = field(repr=False)

    @property
    def k(self) -> int:
        return int(self.knots.shape[0])


def max_pairwise_distance(points: npt.ArrayLike) -> float:
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[0] < 2:
        return 0.0
    return float(distance.pdist(points).max())


def gp_basis(
    coords: npt.ArrayLike, knots: npt.ArrayLike, rho: float, sigma_x2: float = 1.0
) -> np.ndarray:
    coords = np.atleast_2d(np.asarray(coords, dtype=float))
    knots = np.atleast_2d(np.asarray(knots, dtype=float))
    return kernel(distance.cdist(coords, knots), rho, sigma_x2)


def gp_term(
    coords: npt.ArrayLike,
    knots: npt.ArrayLike,
    rho: Optional[float] = None,
    sigma_x2: float = 1.0,
) -> GPTerm:
    """
    :param coords: ``(n, 2)`` planar coordinates, km.
    :param knots: ``(k, 2)`` knot locations, km.
    :param rho: Kernel range; defaults to the largest distance between knots
        (1 km for a single knot).
    :param sigma_x2: Kernel variance.
    """

    knots = np.atleast_2d(np.asarray(knots, dtype=float))
    if rho is None:
        rho = max_pairwise_distance(knots) or 1.0
    if not rho > 0:
        raise ParameterError(f"kernel range must be positive, got {rho}")

    basis = gp_basis(coords, knots, rho, sigma_x2)
    gram = kernel(distance.cdist(knots, knots), rho, sigma_x2)
    gram = (gram + gram.T) / 2.0
    gram[np.diag_indices_from(gram)] += JITTER * np.trace(gram) / gram.shape[0]
    return GPTerm(knots, float(rho), float(sigma_x2), basis, gram)
