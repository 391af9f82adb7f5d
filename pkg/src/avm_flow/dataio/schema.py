# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.dataio.schema** declares the listing and record types, together
with the closed label sets every listing is checked against.
"""

import datetime
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from avm_flow.geo.landmarks import DistanceFeatures
from avm_flow.geo.project import PlanarCoord
from avm_flow.textmine import MinedFeatures

BER_LABELS: Tuple[str, ...] = ("A", "B", "C", "D", "E", "F", "G", "Exempt")

PROPERTY_TYPES: Tuple[str, ...] = (
    "Apartment",
    "Detached House",
    "Duplex",
    "End of Terrace House",
    "Semi-Detached House",
    "Terraced House",
    "Townhouse",
)

POSTCODES: Tuple[str, ...] = (
    "D1",
    "D2",
    "D3",
    "D4",
    "D5",
    "D6",
    "D6W",
    "D7",
    "D8",
    "D9",
    "D10",
    "D11",
    "D12",
    "D13",
    "D14",
    "D15",
    "D16",
    "D17",
    "D18",
    "D20",
    "D22",
    "D24",
    "NCD",
    "SCD",
    "WCD",
    "Dublin County",
)

#: Records with a floor area below this many square metres are removed.
MIN_SIZE_M2 = 37.0

REQUIRED_COLUMNS: Tuple[str, ...] = (
    "price",
    "sale_date",
    "latitude",
    "longitude",
    "neighbourhood",
    "baths",
    "beds",
    "ber",
    "description",
    "size",
    "property_type",
    "postcode",
)

OPTIONAL_COLUMNS: Tuple[str, ...] = ("postcode_corrected", "id")

#: Canonical column name to CSV header name.
DEFAULT_SCHEMA: Dict[str, str] = {
    name: name for name in REQUIRED_COLUMNS + OPTIONAL_COLUMNS
}


@dataclass(frozen=True, kw_only=True)
class RawListing:
    id: int
    price: float
    sale_date: datetime.date
    latitude: float
    longitude: float
    neighbourhood: str
    baths: int
    beds: int
    ber: str
    description: str
    size: float
    property_type: str
    postcode_given: str
    postcode_corrected: Optional[str] = None

    @property
    def postcode_true(self) -> str:
        """Corrected postcode when known, the listed one otherwise."""
        return self.postcode_corrected or self.postcode_given

    @property
    def postcode_change(self) -> Optional[Tuple[str, str]]:
        if self.postcode_corrected and self.postcode_corrected != self.postcode_given:
            return (self.postcode_given, self.postcode_corrected)
        return None


@dataclass(frozen=True, kw_only=True)
class PropertyRecord(RawListing):
    """A cleaned listing with its response and derived features."""

    log_price_per_m2: float
    mined: MinedFeatures
    distances: DistanceFeatures
    location: PlanarCoord

    @property
    def price_per_m2(self) -> float:
        return self.price / self.size
