# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.dataio** defines the transaction schema, reads and writes
listing CSV files and turns validated listings into cleaned records.
"""

from .clean import clean, records_frame
from .ingest import IngestResult, Reject, ingest, write_listings, write_rejects
from .schema import (
    BER_LABELS,
    DEFAULT_SCHEMA,
    MIN_SIZE_M2,
    POSTCODES,
    PROPERTY_TYPES,
    PropertyRecord,
    RawListing,
)

__all__ = [
    "BER_LABELS",
    "DEFAULT_SCHEMA",
    "IngestResult",
    "MIN_SIZE_M2",
    "POSTCODES",
    "PROPERTY_TYPES",
    "PropertyRecord",
    "RawListing",
    "Reject",
    "clean",
    "ingest",
    "records_frame",
    "write_listings",
    "write_rejects",
]
