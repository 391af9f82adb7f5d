# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.geo** provides ellipsoidal distances, landmark proximity
indicators and the local planar projection used by the spatial smooth.
"""

from .distance import Distance, LatLon, geodesic_distance, geodesic_km, haversine_km
from .landmarks import (
    LANDMARK_CLASSES,
    DistanceFeatures,
    Landmark,
    LandmarkSet,
    distance_features,
    distance_features_many,
)
from .project import IFSC, PlanarCoord, project, project_many, unproject

__all__ = [
    "Distance",
    "DistanceFeatures",
    "IFSC",
    "LANDMARK_CLASSES",
    "LatLon",
    "Landmark",
    "LandmarkSet",
    "PlanarCoord",
    "distance_features",
    "distance_features_many",
    "geodesic_distance",
    "geodesic_km",
    "haversine_km",
    "project",
    "project_many",
    "unproject",
]
