# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.smooth.knots** places knots: at evenly spaced quantiles for
the one-dimensional splines, and by farthest-point selection for the
spatial smooth.
"""

import warnings

import numpy as np
import numpy.typing as npt
from scipy.spatial import distance

from avm_flow.base.error import KnotCountWarning, ParameterError


def choose_quantile_knots(x: npt.ArrayLike, k: int) -> np.ndarray:
    """
    Knots at quantile levels ``0, 1/(k-1), ..., 1`` (linear interpolation),
    deduplicated. ``k`` is reduced with a warning when ``x`` has fewer
    distinct values.
    """

    values = np.asarray(x, dtype=float).ravel()
    if k < 2:
        raise ParameterError(f"knot count must be at least 2, got {k}")
    distinct = np.unique(values)
    if distinct.size < 2:
        raise ParameterError("cannot place knots on a constant covariate")
    if distinct.size < k:
        warnings.warn(
            f"only {distinct.size} distinct values, using {distinct.size} knots "
            f"instead of {k}",
            KnotCountWarning,
            stacklevel=2,
        )
        k = distinct.size

    knots = np.unique(np.quantile(values, np.linspace(0.0, 1.0, k)))
    if knots.size < k:
        warnings.warn(
            f"tied quantiles, using {knots.size} knots instead of {k}",
            KnotCountWarning,
            stacklevel=2,
        )
    return knots


def choose_spatial_knots(coords: npt.ArrayLike, k: int, seed: int = 0) -> np.ndarray:
    """
    Farthest-point (maximin) subset of ``k`` distinct coordinates. The seed
    picks the first knot; every following knot is the point farthest from
    those already chosen, ties going to the lowest index.
    """

    points = np.unique(np.atleast_2d(np.asarray(coords, dtype=float)), axis=0)
    if k < 1:
        raise ParameterError(f"knot count must be positive, got {k}")
    if points.shape[0] <= k:
        if points.shape[0] < k:
            warnings.warn(
                f"only {points.shape[0]} distinct locations, using all of them "
                f"instead of {k} knots",
                KnotCountWarning,
                stacklevel=2,
            )
        return points

    rng = np.random.default_rng(seed)
    chosen = [int(rng.integers(points.shape[0]))]
    nearest = distance.cdist(points, points[chosen]).ravel()
    for _ in range(k - 1):
        index = int(np.argmax(nearest))
        chosen.append(index)
        nearest = np.minimum(nearest, distance.cdist(points, points[[index]]).ravel())

    return points[chosen]
