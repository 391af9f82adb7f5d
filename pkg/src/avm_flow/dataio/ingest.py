# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.dataio.ingest** reads listing CSV files into
:class:`RawListing <avm_flow.dataio.schema.RawListing>` objects and writes
them back in the same format.

Malformed rows never stop the import: each one becomes a :class:`Reject`
carrying the data row number and the reason, so it can be audited in the
rejects sidecar file.
"""

import datetime
import math
import os
from typing import Callable, Dict, List, Mapping, NamedTuple, Optional, Sequence

import pandas as pd

from avm_flow.base.error import InputError, SchemaError
from avm_flow.dataio.schema import (
    BER_LABELS,
    DEFAULT_SCHEMA,
    OPTIONAL_COLUMNS,
    POSTCODES,
    PROPERTY_TYPES,
    REQUIRED_COLUMNS,
    RawListing,
)


class Reject(NamedTuple):
    row: int
    reason: str


class IngestResult(NamedTuple):
    listings: List[RawListing]
    rejects: List[Reject]


class _RowError(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


def _number(name: str, text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise _RowError(f"{name} unparseable")
    if not math.isfinite(value):
        raise _RowError(f"{name} unparseable")
    return value


def _positive(name: str, text: str) -> float:
    value = _number(name, text)
    if value <= 0:
        raise _RowError(f"{name} out of range")
    return value


def _count(name: str, text: str) -> int:
    value = _number(name, text)
    if not value.is_integer():
        raise _RowError(f"{name} unparseable")
    if value < 0:
        raise _RowError(f"{name} out of range")
    return int(value)


def _coordinate(name: str, text: str, limit: float) -> float:
    value = _number(name, text)
    if abs(value) > limit:
        raise _RowError(f"{name} out of range")
    return value


def _date(name: str, text: str) -> datetime.date:
    try:
        return datetime.date.fromisoformat(text.strip())
    except ValueError:
        raise _RowError(f"{name} unparseable")


def _label(name: str, text: str, labels: Sequence[str]) -> str:
    if text not in labels:
        raise _RowError(f"{name} unknown label '{text}'")
    return text


def _optional_label(name: str, text: str, labels: Sequence[str]) -> Optional[str]:
    return _label(name, text, labels) if text else None


def ingest(path: str, schema: Optional[Mapping[str, str]] = None) -> IngestResult:
    """
    Reads listings from a UTF-8, comma-delimited CSV file.

    :param path: CSV file with a header row.
    :param schema: Canonical column name to header name; unmapped columns
        keep their canonical names.
    :returns: Parsed listings and the rejected rows.
    """

    if not os.path.isfile(path):
        raise InputError(f"{path}: file not found")

    mapping: Dict[str, str] = {**DEFAULT_SCHEMA, **(schema or {})}
    frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="UTF-8")

    missing = [name for name in REQUIRED_COLUMNS if mapping[name] not in frame.columns]
    if missing:
        raise SchemaError(
            f"{path}: missing required column {', '.join(mapping[m] for m in missing)}"
        )

    header = {name: mapping[name] for name in REQUIRED_COLUMNS}
    for name in OPTIONAL_COLUMNS:
        if mapping[name] in frame.columns:
            header[name] = mapping[name]

    listings: List[RawListing] = []
    rejects: List[Reject] = []
    seen_ids = set()

    for row_number, row in enumerate(frame[list(header.values())].itertuples(index=False)):
        values = dict(zip(header.keys(), row))
        try:
            listing = _parse_row(row_number, values)
            if listing.id in seen_ids:
                raise _RowError("id duplicate")
        except _RowError as err:
            rejects.append(Reject(row_number, err.reason))
            continue
        seen_ids.add(listing.id)
        listings.append(listing)

    return IngestResult(listings, rejects)


_PARSERS: Dict[str, Callable[[str, str], object]] = {
    "price": _positive,
    "sale_date": _date,
    "latitude": lambda n, t: _coordinate(n, t, 90.0),
    "longitude": lambda n, t: _coordinate(n, t, 180.0),
    "neighbourhood": lambda n, t: t,
    "baths": _count,
    "beds": _count,
    "ber": lambda n, t: _label(n, t, BER_LABELS),
    "description": lambda n, t: t,
    "size": _positive,
    "property_type": lambda n, t: _label(n, t, PROPERTY_TYPES),
    "postcode": lambda n, t: _label(n, t, POSTCODES),
    "postcode_corrected": lambda n, t: _optional_label(n, t, POSTCODES),
}


def _parse_row(row_number: int, values: Dict[str, str]) -> RawListing:
    parsed = {name: _PARSERS[name](name, values[name]) for name in _PARSERS if name in values}
    record_id = _count("id", values["id"]) if "id" in values else row_number
    return RawListing(
        id=record_id,
        price=parsed["price"],
        sale_date=parsed["sale_date"],
        latitude=parsed["latitude"],
        longitude=parsed["longitude"],
        neighbourhood=parsed["neighbourhood"],
        baths=parsed["baths"],
        beds=parsed["beds"],
        ber=parsed["ber"],
        description=parsed["description"],
        size=parsed["size"],
        property_type=parsed["property_type"],
        postcode_given=parsed["postcode"],
        postcode_corrected=parsed.get("postcode_corrected"),
    )  # type: ignore[arg-type]


def listings_frame(listings: Sequence[RawListing]) -> pd.DataFrame:
    """Text frame in the interchange format; floats keep their exact repr."""

    rows = [
        {
            "id": str(item.id),
            "price": repr(float(item.price)),
            "sale_date": item.sale_date.isoformat(),
            "latitude": repr(float(item.latitude)),
            "longitude": repr(float(item.longitude)),
            "neighbourhood": item.neighbourhood,
            "baths": str(item.baths),
            "beds": str(item.beds),
            "ber": item.ber,
            "description": item.description,
            "size": repr(float(item.size)),
            "property_type": item.property_type,
            "postcode": item.postcode_given,
            "postcode_corrected": item.postcode_corrected or "",
        }
        for item in listings
    ]
    columns = ["id", *REQUIRED_COLUMNS, "postcode_corrected"]
    return pd.DataFrame(rows, columns=columns)


def write_listings(listings: Sequence[RawListing], path: str):
    listings_frame(listings).to_csv(
        path, index=False, encoding="UTF-8", lineterminator="\n"
    )


def write_rejects(rejects: Sequence[Reject], path: str):
    pd.DataFrame(rejects, columns=["row", "reason"]).to_csv(
        path, index=False, encoding="UTF-8", lineterminator="\n"
    )
