# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.knn** is the nearest-neighbour baseline: a property is valued
at the median price per m² of its ``k`` geodesically nearest neighbours of
the same type, times its size. Ties in distance go to the lower record id,
and a record is never its own neighbour.
"""

import warnings
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.spatial import cKDTree

from avm_flow.base.error import DegradedEstimateWarning, NoComparablesError
from avm_flow.dataio.clean import records_frame
from avm_flow.dataio.schema import PropertyRecord
from avm_flow.eval.metrics import metrics
from avm_flow.fit.design import Records
from avm_flow.geo.distance import geodesic_km

KS: Tuple[int, ...] = (3, 5, 7, 9)

#: Planar search radius relative to the geodesic distance it must cover.
SEARCH_MARGIN = 1.05

KNN_COLUMNS = ["k", "n", "mdape", "within10", "within20"]


@dataclass(frozen=True)
class KnnEstimate:
    id: int
    k: int
    ppm2_estimate: float
    price_estimate: float
    neighbours_used: Tuple[int, ...]
    degraded: bool


def _rank(ids: np.ndarray, distances: np.ndarray) -> np.ndarray:
    return np.lexsort((ids, distances))


def knn_estimate(query: PropertyRecord, pool: Sequence[PropertyRecord], k: int) -> KnnEstimate:
    same = [
        item
        for item in pool
        if item.property_type == query.property_type and item.id != query.id
    ]
    if not same:
        raise NoComparablesError(query.id, query.property_type)

    ids = np.array([item.id for item in same])
    distances = geodesic_km(
        query.latitude,
        query.longitude,
        np.array([item.latitude for item in same]),
        np.array([item.longitude for item in same]),
    )
    chosen = _rank(ids, distances)[:k]
    ppm2 = float(np.median([same[index].price_per_m2 for index in chosen]))
    degraded = chosen.size < k
    if degraded:
        warnings.warn(
            f"record {query.id}: {chosen.size} comparables for k={k}",
            DegradedEstimateWarning,
            stacklevel=2,
        )
    return KnnEstimate(
        id=query.id,
        k=k,
        ppm2_estimate=ppm2,
        price_estimate=ppm2 * query.size,
        neighbours_used=tuple(int(ids[index]) for index in chosen),
        degraded=bool(degraded),
    )


@dataclass(frozen=True)
class KnnReport:
    table: pd.DataFrame
    estimates: pd.DataFrame
    excluded: int


def _ranked_neighbours(
    index: int,
    tree: cKDTree,
    xy: np.ndarray,
    lat: np.ndarray,
    lon: np.ndarray,
    ids: np.ndarray,
    depth: int,
) -> np.ndarray:
    """Same-group positions ordered by (geodesic distance, id), self excluded."""

    m = xy.shape[0]
    _, first = tree.query(xy[index], k=min(depth + 1, m))
    first = np.atleast_1d(first)
    first = first[first != index]
    reach = geodesic_km(lat[index], lon[index], lat[first], lon[first])
    radius = np.sort(reach)[min(depth, first.size) - 1] * SEARCH_MARGIN + 1e-9

    ball = np.asarray(tree.query_ball_point(xy[index], radius), dtype=int)
    ball = ball[ball != index]
    distances = geodesic_km(lat[index], lon[index], lat[ball], lon[ball])
    return ball[_rank(ids[ball], distances)]


def knn_evaluate(records: Records, ks: Sequence[int] = KS) -> KnnReport:
    """
    Leave-one-out evaluation of every ``k``. A k-d tree over planar
    coordinates narrows each search; the final ranking uses geodesic
    distances, so estimates equal :func:`knn_estimate` on the full pool.
    """

    frame = records_frame(records)
    ks = sorted(int(k) for k in ks)
    depth = ks[-1]
    rows: List[dict] = []
    excluded = 0
    degraded = 0

    for _, group in frame.groupby("property_type", sort=True):
        if len(group) < 2:
            excluded += len(group)
            continue
        ids = group["id"].to_numpy()
        lat = group["latitude"].to_numpy(dtype=float)
        lon = group["longitude"].to_numpy(dtype=float)
        xy = group[["x_km", "y_km"]].to_numpy(dtype=float)
        ppm2 = (group["price"] / group["size"]).to_numpy(dtype=float)
        size = group["size"].to_numpy(dtype=float)
        price = group["price"].to_numpy(dtype=float)
        tree = cKDTree(xy)

        for index in range(len(group)):
            ranked = _ranked_neighbours(index, tree, xy, lat, lon, ids, depth)
            for k in ks:
                chosen = ranked[:k]
                estimate = float(np.median(ppm2[chosen]))
                degraded += chosen.size < k
                rows.append(
                    {
                        "id": int(ids[index]),
                        "k": k,
                        "actual": price[index],
                        "ppm2_estimate": estimate,
                        "price_estimate": estimate * size[index],
                        "degraded": bool(chosen.size < k),
                    }
                )

    if degraded:
        warnings.warn(
            f"{degraded} estimates used fewer neighbours than requested",
            DegradedEstimateWarning,
            stacklevel=2,
        )
    if excluded:
        warnings.warn(
            f"{excluded} records have no comparables and are excluded",
            DegradedEstimateWarning,
            stacklevel=2,
        )

    estimates = pd.DataFrame(
        rows,
        columns=["id", "k", "actual", "ppm2_estimate", "price_estimate", "degraded"],
    ).sort_values(["k", "id"], kind="stable", ignore_index=True)

    table = []
    for k in ks:
        part = estimates[estimates["k"] == k]
        if part.empty:
            table.append({"k": k, "n": 0})
            continue
        bundle = metrics(part["actual"], part["price_estimate"])
        table.append(
            {
                "k": k,
                "n": bundle.n,
                "mdape": bundle.mdape,
                "within10": bundle.within10,
                "within20": bundle.within20,
            }
        )
    return KnnReport(pd.DataFrame(table, columns=KNN_COLUMNS), estimates, excluded)
