# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.synth.regions** lays out synthetic Dublin: a bounding box,
one centroid per postcode (each postcode region is the Voronoi cell of its
centroid, so regions are convex), and the property mix per postcode.
"""

from typing import Dict, Tuple

import numpy as np
from scipy.spatial import cKDTree

from avm_flow.dataio.schema import POSTCODES, PROPERTY_TYPES
from avm_flow.geo.project import project_many

#: ``(lat_min, lon_min, lat_max, lon_max)`` of the study region.
STUDY_BBOX: Tuple[float, float, float, float] = (53.29, -6.42, 53.46, -6.06)

CENTROIDS: Dict[str, Tuple[float, float]] = {
    "D1": (53.352, -6.258),
    "D2": (53.338, -6.252),
    "D3": (53.362, -6.225),
    "D4": (53.327, -6.225),
    "D5": (53.382, -6.190),
    "D6": (53.318, -6.262),
    "D6W": (53.310, -6.295),
    "D7": (53.357, -6.285),
    "D8": (53.338, -6.290),
    "D9": (53.380, -6.245),
    "D10": (53.340, -6.345),
    "D11": (53.392, -6.290),
    "D12": (53.322, -6.325),
    "D13": (53.395, -6.140),
    "D14": (53.298, -6.245),
    "D15": (53.390, -6.390),
    "D16": (53.293, -6.275),
    "D17": (53.405, -6.200),
    "D18": (53.295, -6.165),
    "D20": (53.345, -6.370),
    "D22": (53.318, -6.395),
    "D24": (53.293, -6.370),
    "NCD": (53.445, -6.200),
    "SCD": (53.300, -6.110),
    "WCD": (53.355, -6.410),
    "Dublin County": (53.440, -6.330),
}

NEIGHBOURHOODS: Dict[str, str] = {
    **{code: f"Dublin {code[1:]}" for code in POSTCODES if code.startswith("D")},
    "NCD": "North County Dublin",
    "SCD": "South County Dublin",
    "WCD": "West County Dublin",
    "Dublin County": "Dublin County",
}

# Sales per postcode and property type, in PROPERTY_TYPES order.
PROPERTY_MIX: Dict[str, Tuple[int, ...]] = {
    "D1": (51, 0, 1, 2, 0, 7, 0),
    "D2": (45, 0, 0, 1, 1, 5, 2),
    "D3": (27, 9, 0, 21, 33, 62, 0),
    "D4": (72, 22, 3, 20, 38, 73, 8),
    "D5": (10, 12, 3, 26, 82, 59, 0),
    "D6": (39, 15, 3, 19, 36, 60, 5),
    "D6W": (17, 11, 1, 10, 57, 22, 0),
    "D7": (38, 7, 4, 32, 23, 107, 0),
    "D8": (117, 1, 5, 26, 7, 112, 4),
    "D9": (53, 9, 3, 23, 101, 59, 2),
    "D10": (5, 2, 0, 9, 0, 14, 0),
    "D11": (28, 4, 2, 15, 35, 39, 2),
    "D12": (7, 10, 0, 45, 35, 86, 0),
    "D13": (24, 15, 6, 15, 45, 30, 0),
    "D14": (26, 25, 1, 12, 93, 39, 4),
    "D15": (74, 46, 22, 20, 117, 32, 2),
    "D16": (32, 19, 1, 6, 115, 7, 2),
    "D17": (13, 3, 1, 2, 8, 4, 0),
    "D18": (76, 60, 4, 9, 59, 14, 4),
    "D20": (5, 1, 1, 1, 8, 8, 0),
    "D22": (14, 7, 2, 7, 30, 18, 0),
    "D24": (34, 7, 4, 17, 37, 28, 2),
    "NCD": (145, 107, 34, 63, 176, 129, 7),
    "SCD": (209, 140, 21, 42, 267, 128, 8),
    "WCD": (58, 21, 12, 18, 132, 36, 5),
    "Dublin County": (31, 14, 5, 5, 8, 8, 0),
}


def mix_probabilities() -> Tuple[Tuple[Tuple[str, str], ...], np.ndarray]:
    """``(postcode, type)`` pairs and their sampling probabilities."""

    pairs = []
    weights = []
    for postcode in POSTCODES:
        for property_type, count in zip(PROPERTY_TYPES, PROPERTY_MIX[postcode]):
            if count:
                pairs.append((postcode, property_type))
                weights.append(count)
    weights = np.asarray(weights, dtype=float)
    return tuple(pairs), weights / weights.sum()


class RegionMap:
    """Planar Voronoi partition of the study region by postcode centroid."""

    def __init__(self):
        lat = np.array([CENTROIDS[code][0] for code in POSTCODES])
        lon = np.array([CENTROIDS[code][1] for code in POSTCODES])
        self.centroids = project_many(lat, lon)
        self.tree = cKDTree(self.centroids)
        corners = project_many(
            np.array([STUDY_BBOX[0], STUDY_BBOX[2]]), np.array([STUDY_BBOX[1], STUDY_BBOX[3]])
        )
        self.low = corners.min(axis=0)
        self.high = corners.max(axis=0)

    def region_of(self, xy: np.ndarray) -> np.ndarray:
        """Postcode index of each planar point."""
        return self.tree.query(np.atleast_2d(xy))[1]

    def inside(self, xy: np.ndarray) -> np.ndarray:
        xy = np.atleast_2d(xy)
        return np.all((xy >= self.low) & (xy <= self.high), axis=1)

    def sample(self, rng: np.random.Generator, postcode: str, count: int, spread: float = 1.5):
        """
        Planar points inside the postcode's cell, drawn around its centroid
        and rejected when they leave the cell or the study box.
        """

        target = POSTCODES.index(postcode)
        centre = self.centroids[target]
        found = np.empty((0, 2))
        while found.shape[0] < count:
            batch = centre + rng.normal(0.0, spread, size=(max(4 * count, 16), 2))
            keep = self.inside(batch) & (self.region_of(batch) == target)
            found = np.vstack([found, batch[keep]])
        return found[:count]
