# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.geo.distance** solves the inverse geodesic problem on the
WGS-84 ellipsoid, falling back to the great-circle distance whenever the
ellipsoidal solution is not finite.
"""

from typing import NamedTuple, Tuple

import numpy as np
import numpy.typing as npt
from pyproj import Geod

from avm_flow.base.error import ParameterError

#: Mean Earth radius, km.
EARTH_RADIUS_KM = 6371.0

_geod = Geod(ellps="WGS84")


class LatLon(NamedTuple):
    lat: float
    lon: float


class Distance(NamedTuple):
    km: float
    fallback: bool = False
    """Set when the great-circle distance replaced the geodesic one."""


def _check(lat: npt.ArrayLike, lon: npt.ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    lat = np.asarray(lat, dtype=float)
    lon = np.asarray(lon, dtype=float)
    if not (np.all(np.abs(lat) <= 90.0) and np.all(np.abs(lon) <= 180.0)):
        raise ParameterError("latitude must be in [-90, 90], longitude in [-180, 180]")
    return lat, lon


def haversine_km(lat1, lon1, lat2, lon2) -> np.ndarray:
    phi1, lam1, phi2, lam2 = map(np.radians, (lat1, lon1, lat2, lon2))
    a = (
        np.sin((phi2 - phi1) / 2.0) ** 2
        + np.cos(phi1) * np.cos(phi2) * np.sin((lam2 - lam1) / 2.0) ** 2
    )
    return 2.0 * EARTH_RADIUS_KM * np.arcsin(np.sqrt(np.clip(a, 0.0, 1.0)))


def _inverse_km(lat1, lon1, lat2, lon2) -> Tuple[np.ndarray, np.ndarray]:
    lat1, lon1 = _check(lat1, lon1)
    lat2, lon2 = _check(lat2, lon2)
    lat1, lon1, lat2, lon2 = np.broadcast_arrays(lat1, lon1, lat2, lon2)

    with np.errstate(invalid="ignore"):
        _, _, meters = _geod.inv(
            lon1.ravel(), lat1.ravel(), lon2.ravel(), lat2.ravel()
        )
    km = np.asarray(meters, dtype=float).reshape(lat1.shape) / 1000.0
    fallback = ~np.isfinite(km)
    if np.any(fallback):
        km = np.where(fallback, haversine_km(lat1, lon1, lat2, lon2), km)
    return np.abs(km), fallback


def geodesic_km(lat1, lon1, lat2, lon2) -> np.ndarray:
    """Vectorised geodesic distance in km; inputs broadcast together."""
    return _inverse_km(lat1, lon1, lat2, lon2)[0]


def geodesic_distance(a: Tuple[float, float], b: Tuple[float, float]) -> Distance:
    if a[0] == b[0] and a[1] == b[1]:
        _check(a[0], a[1])
        return Distance(0.0)
    km, fallback = _inverse_km(a[0], a[1], b[0], b[1])
    return Distance(float(km), bool(fallback))
