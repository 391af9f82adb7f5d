# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.geo.project** maps latitude and longitude to kilometres east
and north of a fixed origin with an equirectangular projection scaled by the
WGS-84 radii of curvature at the origin: ``x = N(φ₀)·cos(φ₀)·Δλ``,
``y = M(φ₀)·Δφ``.

The origin defaults to the IFSC, so projected coordinates are reproducible
across runs and datasets.
"""

from functools import lru_cache
from typing import NamedTuple, Tuple

import numpy as np
from pyproj import Geod

from avm_flow.base.error import ProjectionError
from avm_flow.geo.distance import LatLon, haversine_km

IFSC = LatLon(53.3495, -6.2496)

#: Farthest a point may lie from the origin, km.
MAX_DISTANCE_KM = 100.0

_ellipsoid = Geod(ellps="WGS84")


class PlanarCoord(NamedTuple):
    x: float
    y: float


@lru_cache(maxsize=16)
def _scales(lat0: float) -> Tuple[float, float]:
    """Kilometres per radian of longitude and of latitude at ``lat0``."""

    a = _ellipsoid.a / 1000.0
    e2 = _ellipsoid.es
    s2 = np.sin(np.radians(lat0)) ** 2
    prime_vertical = a / np.sqrt(1.0 - e2 * s2)
    meridional = a * (1.0 - e2) / (1.0 - e2 * s2) ** 1.5
    return float(prime_vertical * np.cos(np.radians(lat0))), float(meridional)


def project_many(
    lat, lon, origin: Tuple[float, float] = IFSC
) -> np.ndarray:
    """Projects arrays of points into an ``(n, 2)`` array of km."""

    lat = np.atleast_1d(np.asarray(lat, dtype=float))
    lon = np.atleast_1d(np.asarray(lon, dtype=float))
    lat0, lon0 = origin

    reach = haversine_km(lat0, lon0, lat, lon)
    if reach.size and np.max(reach) > MAX_DISTANCE_KM:
        raise ProjectionError(float(np.max(reach)), MAX_DISTANCE_KM)

    east, north = _scales(float(lat0))
    x = east * np.radians(lon - lon0)
    y = north * np.radians(lat - lat0)
    return np.column_stack([x, y])


def project(p: Tuple[float, float], origin: Tuple[float, float] = IFSC) -> PlanarCoord:
    xy = project_many(p[0], p[1], origin)[0]
    return PlanarCoord(float(xy[0]), float(xy[1]))


def unproject(xy, origin: Tuple[float, float] = IFSC) -> np.ndarray:
    """Inverse of :func:`project_many`; returns ``(n, 2)`` of lat, lon."""

    xy = np.atleast_2d(np.asarray(xy, dtype=float))
    lat0, lon0 = origin
    east, north = _scales(float(lat0))
    lat = lat0 + np.degrees(xy[:, 1] / north)
    lon = lon0 + np.degrees(xy[:, 0] / east)
    return np.column_stack([lat, lon])
