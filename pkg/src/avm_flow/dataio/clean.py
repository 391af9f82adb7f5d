# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.dataio.clean** removes listings below the minimum floor area
and derives the response together with the mined and distance features.
"""

import dataclasses
import math
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from avm_flow.base.error import NoUsableRecordsError, SchemaError
from avm_flow.dataio.schema import (
    BER_LABELS,
    MIN_SIZE_M2,
    POSTCODES,
    PROPERTY_TYPES,
    PropertyRecord,
    RawListing,
)
from avm_flow.geo.landmarks import (
    INDICATORS,
    DistanceFeatures,
    LandmarkSet,
    default_landmarks,
    distance_features_many,
)
from avm_flow.geo.project import PlanarCoord, project_many
from avm_flow.textmine import FLAGS, PhraseLexicon, apply_interactions, mine

_RAW_FIELDS = [field.name for field in dataclasses.fields(RawListing)]


def _check_labels(listing: RawListing):
    checks = [
        ("ber", listing.ber, BER_LABELS),
        ("property_type", listing.property_type, PROPERTY_TYPES),
        ("postcode", listing.postcode_given, POSTCODES),
    ]
    if listing.postcode_corrected is not None:
        checks.append(("postcode_corrected", listing.postcode_corrected, POSTCODES))
    for name, value, labels in checks:
        if value not in labels:
            raise SchemaError(f"record {listing.id}: {name} unknown label '{value}'")
    if not (listing.price > 0 and listing.size > 0):
        raise SchemaError(f"record {listing.id}: price and size must be positive")


def clean(
    listings: Sequence[RawListing],
    lexicon: Optional[PhraseLexicon] = None,
    landmarks: Optional[LandmarkSet] = None,
) -> List[PropertyRecord]:
    """
    Keeps listings of at least :data:`MIN_SIZE_M2` square metres and builds
    their records. Cleaned records are listings too, so cleaning twice gives
    the same record set.
    """

    landmarks = landmarks or default_landmarks()
    kept = [item for item in listings if item.size >= MIN_SIZE_M2]
    for item in kept:
        _check_labels(item)
    if not kept:
        raise NoUsableRecordsError()

    lat = np.array([item.latitude for item in kept])
    lon = np.array([item.longitude for item in kept])
    distances = distance_features_many(lat, lon, landmarks)
    locations = project_many(lat, lon)

    records: List[PropertyRecord] = []
    for index, item in enumerate(kept):
        row = distances.iloc[index]
        features = DistanceFeatures(
            ifsc_km=float(row["ifsc_km"]),
            **{name: int(row[name]) for name in INDICATORS.values()},
        )
        mined = apply_interactions(
            mine(item.description, lexicon), features.within_city_centre
        )
        log_ppm2 = math.log(item.price / item.size)
        if not math.isfinite(log_ppm2):
            continue
        records.append(
            PropertyRecord(
                **{name: getattr(item, name) for name in _RAW_FIELDS},
                log_price_per_m2=log_ppm2,
                mined=mined,
                distances=features,
                location=PlanarCoord(
                    float(locations[index, 0]), float(locations[index, 1])
                ),
            )
        )

    if not records:
        raise NoUsableRecordsError()
    return records


def change_label(given: str, corrected: str) -> str:
    return f"{given}.{corrected}"


def records_frame(
    records: Union[Sequence[PropertyRecord], pd.DataFrame],
) -> pd.DataFrame:
    """
    Flattens records into one frame row each: listing fields, response,
    planar location, mined flags and distance features. ``postcode`` holds
    the listed postcode and ``postcode_true`` the corrected one.
    """

    if isinstance(records, pd.DataFrame):
        return records

    columns: Dict[str, list] = {
        name: []
        for name in [
            "id",
            "price",
            "size",
            "beds",
            "baths",
            "log_price_per_m2",
            "latitude",
            "longitude",
            "x_km",
            "y_km",
            "property_type",
            "ber",
            "postcode",
            "postcode_true",
            "postcode_change",
            *FLAGS,
            "ifsc_km",
            *INDICATORS.values(),
        ]
    }
    for record in records:
        change = record.postcode_change
        columns["id"].append(record.id)
        columns["price"].append(record.price)
        columns["size"].append(record.size)
        columns["beds"].append(record.beds)
        columns["baths"].append(record.baths)
        columns["log_price_per_m2"].append(record.log_price_per_m2)
        columns["latitude"].append(record.latitude)
        columns["longitude"].append(record.longitude)
        columns["x_km"].append(record.location.x)
        columns["y_km"].append(record.location.y)
        columns["property_type"].append(record.property_type)
        columns["ber"].append(record.ber)
        columns["postcode"].append(record.postcode_given)
        columns["postcode_true"].append(record.postcode_true)
        columns["postcode_change"].append(change_label(*change) if change else "")
        for name, value in record.mined.as_dict().items():
            columns[name].append(value)
        distances = dataclasses.asdict(record.distances)
        for name, value in distances.items():
            columns[name].append(value)

    return pd.DataFrame(columns)
