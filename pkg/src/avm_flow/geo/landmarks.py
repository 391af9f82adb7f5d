# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.geo.landmarks** loads landmark lists and turns distances to
the nearest landmark of each class into proximity indicators.

Landmarks come from a CSV file with ``class,name,latitude,longitude``
columns; the per-class radius lives in a separate YAML (or JSON) block. A
distance equal to the radius counts as inside.
"""

from dataclasses import dataclass
from typing import Dict, List, Mapping, NamedTuple, Optional, Tuple

import numpy as np
import pandas as pd

from avm_flow import resources
from avm_flow.base import plugins
from avm_flow.base.error import ConfigError
from avm_flow.geo.distance import geodesic_km

LANDMARK_CLASSES: Tuple[str, ...] = (
    "ifsc",
    "airport",
    "city_centre",
    "dart",
    "luas",
    "park",
)

#: Indicator field of :class:`DistanceFeatures` for each thresholded class.
INDICATORS: Dict[str, str] = {
    "airport": "near_airport",
    "city_centre": "within_city_centre",
    "dart": "near_dart",
    "luas": "near_luas",
    "park": "near_park",
}

DEFAULT_THRESHOLDS: Dict[str, Optional[float]] = {
    "ifsc": None,
    "airport": 5.0,
    "city_centre": 2.0,
    "dart": 1.5,
    "luas": 1.0,
    "park": 5.0,
}


class Landmark(NamedTuple):
    kind: str
    name: str
    latitude: float
    longitude: float
    threshold: Optional[float]


@dataclass(frozen=True)
class DistanceFeatures:
    ifsc_km: float
    near_airport: int
    within_city_centre: int
    near_dart: int
    near_luas: int
    near_park: int


class LandmarkSet:
    landmarks: Tuple[Landmark, ...]
    thresholds: Dict[str, Optional[float]]

    def __init__(
        self,
        landmarks: List[Tuple[str, str, float, float]],
        thresholds: Optional[Mapping[str, Optional[float]]] = None,
    ):
        self.thresholds = dict(DEFAULT_THRESHOLDS)
        for kind, value in (thresholds or {}).items():
            if kind not in LANDMARK_CLASSES:
                raise ConfigError(f"thresholds: unknown landmark class '{kind}'")
            if value is not None and (not np.isfinite(value) or value < 0):
                raise ConfigError(f"thresholds: {kind} must be a non-negative km value")
            self.thresholds[kind] = None if value is None else float(value)

        items: List[Landmark] = []
        for kind, name, lat, lon in landmarks:
            if kind not in LANDMARK_CLASSES:
                raise ConfigError(f"landmarks: unknown class '{kind}' for '{name}'")
            items.append(
                Landmark(kind, name, float(lat), float(lon), self.thresholds[kind])
            )
        self.landmarks = tuple(items)

    def of_class(self, kind: str) -> List[Landmark]:
        return [lm for lm in self.landmarks if lm.kind == kind]

    def require_all(self):
        missing = [kind for kind in LANDMARK_CLASSES if not self.of_class(kind)]
        if missing:
            raise ConfigError(f"landmarks: no entry for class {', '.join(missing)}")

    @staticmethod
    def load(
        csv_path: Optional[str] = None,
        thresholds: Optional[Mapping[str, Optional[float]]] = None,
        thresholds_path: Optional[str] = None,
    ) -> "LandmarkSet":
        csv_path = csv_path or resources.path_of(resources.LANDMARKS)
        try:
            frame = pd.read_csv(csv_path, dtype={"class": str, "name": str})
        except (OSError, pd.errors.ParserError) as ex:
            raise ConfigError(f"{csv_path}: {ex}") from ex

        missing = {"class", "name", "latitude", "longitude"} - set(frame.columns)
        if missing:
            raise ConfigError(f"{csv_path}: missing column {', '.join(sorted(missing))}")

        merged: Dict[str, Optional[float]] = {}
        if thresholds_path is None and csv_path == resources.path_of(resources.LANDMARKS):
            thresholds_path = resources.path_of(resources.THRESHOLDS)
        if thresholds_path is not None:
            merged.update(plugins.load_document(thresholds_path) or {})
        merged.update(thresholds or {})

        rows = list(
            frame[["class", "name", "latitude", "longitude"]].itertuples(
                index=False, name=None
            )
        )
        return LandmarkSet(rows, merged)


_default_landmarks: Optional[LandmarkSet] = None


def default_landmarks() -> LandmarkSet:
    global _default_landmarks
    if _default_landmarks is None:
        _default_landmarks = LandmarkSet.load()
    return _default_landmarks


def nearest_km(lat, lon, landmarks: List[Landmark]) -> np.ndarray:
    lat = np.atleast_1d(np.asarray(lat, dtype=float))
    lon = np.atleast_1d(np.asarray(lon, dtype=float))
    lm_lat = np.array([lm.latitude for lm in landmarks])
    lm_lon = np.array([lm.longitude for lm in landmarks])
    km = geodesic_km(lat[:, None], lon[:, None], lm_lat[None, :], lm_lon[None, :])
    return km.min(axis=1)


def distance_features_many(lat, lon, landmarks: LandmarkSet) -> pd.DataFrame:
    """Distance features for many points, one frame row per point."""

    landmarks.require_all()
    columns: Dict[str, np.ndarray] = {
        "ifsc_km": nearest_km(lat, lon, landmarks.of_class("ifsc"))
    }
    for kind, field in INDICATORS.items():
        km = nearest_km(lat, lon, landmarks.of_class(kind))
        threshold = landmarks.thresholds[kind]
        if threshold is None:
            raise ConfigError(f"thresholds: {kind} needs a radius")
        columns[field] = (km <= threshold).astype(int)
    return pd.DataFrame(columns)


def distance_features(
    p: Tuple[float, float], landmarks: LandmarkSet
) -> DistanceFeatures:
    row = distance_features_many(p[0], p[1], landmarks).iloc[0]
    return DistanceFeatures(
        ifsc_km=float(row["ifsc_km"]),
        **{field: int(row[field]) for field in INDICATORS.values()},
    )
