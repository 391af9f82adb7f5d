# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.svt** evaluates the fitted location surface on a regular
lattice and derives site-value-tax quantities from it.

The location value of a cell is the exponentiated spatial contribution to
log price per m²; its scaling is the ratio to the smallest location value
on the lattice, so scalings start at exactly 1 and do not depend on the
centring of the spatial term. A site's tax is
``scaling × site size × baseline``, shared equally by its apartments.
"""

import json
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
import numpy.typing as npt
import pandas as pd
from scipy.spatial import cKDTree

from avm_flow.base.error import InputError, ParameterError
from avm_flow.fit.penalized import FittedModel
from avm_flow.geo.project import IFSC, project_many, unproject

DEFAULT_RESOLUTION = 0.25
DEFAULT_PADDING = 1.0

SURFACE_COLUMNS = ["x_km", "y_km", "lat", "lon", "log_value", "location_value", "scaling"]

BBox = Tuple[float, float, float, float]


@dataclass(frozen=True)
class LocationSurface:
    """Spatial contribution on a lattice, cells ordered row by row (y, then x)."""

    coords: np.ndarray = field(repr=False)
    log_value: np.ndarray = field(repr=False)
    resolution: float
    bbox: BBox
    shape: Tuple[int, int]

    @property
    def location_value(self) -> np.ndarray:
        return np.exp(self.log_value)

    def __len__(self) -> int:
        return int(self.log_value.size)


@dataclass(frozen=True)
class ScalingField:
    surface: LocationSurface = field(repr=False)
    scaling: np.ndarray = field(repr=False)

    def bands(self, count: int) -> np.ndarray:
        """Quantile band, 1 to ``count``, of every cell's scaling."""

        if count < 1:
            raise ParameterError(f"band count must be positive, got {count}")
        edges = np.quantile(self.scaling, np.linspace(0.0, 1.0, count + 1))
        return np.searchsorted(edges[1:-1], self.scaling, side="right") + 1

    def to_frame(self, bands: int = 0) -> pd.DataFrame:
        coords = self.surface.coords
        latlon = unproject(coords)
        frame = pd.DataFrame(
            {
                "x_km": coords[:, 0],
                "y_km": coords[:, 1],
                "lat": latlon[:, 0],
                "lon": latlon[:, 1],
                "log_value": self.surface.log_value,
                "location_value": self.surface.location_value,
                "scaling": self.scaling,
            }
        )
        if bands:
            frame["band"] = self.bands(bands)
        return frame


def padded_bbox(coords: npt.ArrayLike, padding: float = DEFAULT_PADDING) -> BBox:
    coords = np.atleast_2d(np.asarray(coords, dtype=float))
    low = coords.min(axis=0) - padding
    high = coords.max(axis=0) + padding
    return (float(low[0]), float(low[1]), float(high[0]), float(high[1]))


def data_bbox(model: FittedModel, padding: float = DEFAULT_PADDING) -> BBox:
    """Bounding box of the locations the spatial term was fit on, padded."""

    spatial = model.recipe.spatial
    if spatial is None:
        raise ParameterError(f"model {model.spec.name} has no spatial term")
    xmin, ymin, xmax, ymax = spatial.extent
    return padded_bbox([(xmin, ymin), (xmax, ymax)], padding)


def spatial_contribution(model: FittedModel, coords: npt.ArrayLike) -> np.ndarray:
    spatial = model.recipe.spatial
    if spatial is None:
        raise ParameterError(f"model {model.spec.name} has no spatial term")
    coords = np.atleast_2d(np.asarray(coords, dtype=float))
    return spatial.rows(coords) @ model.coefficients("gp(location)")


def surface(
    model: FittedModel,
    bbox: Optional[BBox] = None,
    resolution: float = DEFAULT_RESOLUTION,
) -> LocationSurface:
    """
    :param bbox: ``(xmin, ymin, xmax, ymax)`` in km; defaults to the
        training locations padded by 1 km.
    """

    spatial = model.recipe.spatial
    if spatial is None:
        raise ParameterError(f"model {model.spec.name} has no spatial term")
    if not resolution > 0:
        raise ParameterError(f"resolution must be positive, got {resolution}")
    if bbox is None:
        bbox = data_bbox(model)
    xmin, ymin, xmax, ymax = bbox
    if not (xmax >= xmin and ymax >= ymin):
        raise ParameterError(f"empty bounding box {bbox}")

    xs = xmin + resolution * np.arange(int(np.floor((xmax - xmin) / resolution + 1e-9)) + 1)
    ys = ymin + resolution * np.arange(int(np.floor((ymax - ymin) / resolution + 1e-9)) + 1)
    gx, gy = np.meshgrid(xs, ys)
    coords = np.column_stack([gx.ravel(), gy.ravel()])
    return LocationSurface(
        coords=coords,
        log_value=spatial_contribution(model, coords),
        resolution=float(resolution),
        bbox=(float(xmin), float(ymin), float(xmax), float(ymax)),
        shape=(ys.size, xs.size),
    )


def scaling_field(location: LocationSurface) -> ScalingField:
    if len(location) == 0:
        raise ParameterError("surface has no cells")
    return ScalingField(location, np.exp(location.log_value - location.log_value.min()))


def site_tax(scaling: float, site_size: float, baseline: float) -> float:
    """
    :param scaling: Location scaling of the site, at least 1.
    :param site_size: Acres.
    :param baseline: Euro per acre.
    """

    if not scaling >= 1:
        raise ParameterError(f"scaling must be at least 1, got {scaling}")
    if not site_size > 0:
        raise ParameterError(f"site size must be positive, got {site_size}")
    if not baseline > 0:
        raise ParameterError(f"baseline must be positive, got {baseline}")
    return scaling * site_size * baseline


def apartment_site_tax(
    scaling: float, site_size: float, baseline: float, n_apartments: int
) -> float:
    if n_apartments < 1:
        raise ParameterError(f"a site has at least one apartment, got {n_apartments}")
    return site_tax(scaling, site_size, baseline) / n_apartments


def write_surface(scalings: ScalingField, csv_path: str, header_path: str, bands: int = 0):
    scalings.to_frame(bands).to_csv(csv_path, index=False, lineterminator="\n")
    location = scalings.surface
    header = {
        "bbox": list(location.bbox),
        "resolution": location.resolution,
        "shape": list(location.shape),
        "origin": list(IFSC),
        "columns": SURFACE_COLUMNS + (["band"] if bands else []),
        "bands": bands,
        "min_location_value": float(location.location_value.min()),
    }
    with open(header_path, "w", encoding="UTF-8", newline="\n") as out:
        json.dump(header, out, indent=1, sort_keys=True)
        out.write("\n")


def read_surface(csv_path: str) -> pd.DataFrame:
    try:
        frame = pd.read_csv(csv_path)
    except FileNotFoundError as ex:
        raise InputError(f"{csv_path}: file not found") from ex
    missing = [name for name in SURFACE_COLUMNS if name not in frame.columns]
    if missing:
        raise InputError(f"{csv_path}: missing columns {', '.join(missing)}")
    return frame


def site_taxes(sites: pd.DataFrame, cells: pd.DataFrame, baseline: float) -> pd.DataFrame:
    """
    Looks up each site's scaling at the nearest lattice cell and adds the
    site tax and the per-apartment tax.
    """

    for name in ("latitude", "longitude", "site_size"):
        if name not in sites.columns:
            raise InputError(f"sites: missing column '{name}'")
    xy = project_many(sites["latitude"].to_numpy(float), sites["longitude"].to_numpy(float))
    _, nearest = cKDTree(cells[["x_km", "y_km"]].to_numpy(float)).query(xy)
    scaling = cells["scaling"].to_numpy(float)[np.atleast_1d(nearest)]
    apartments = (
        sites["n_apartments"].to_numpy(int)
        if "n_apartments" in sites.columns
        else np.ones(len(sites), dtype=int)
    )

    result = sites.copy()
    result["scaling"] = scaling
    result["site_tax"] = [
        site_tax(s, size, baseline) for s, size in zip(scaling, sites["site_size"])
    ]
    result["apartment_tax"] = [
        apartment_site_tax(s, size, baseline, int(n))
        for s, size, n in zip(scaling, sites["site_size"], apartments)
    ]
    return result
