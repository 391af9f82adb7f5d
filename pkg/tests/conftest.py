# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

import datetime
import os

import numpy as np
import pytest

from avm_flow.dataio import RawListing, clean, records_frame, write_listings
from avm_flow.synth import GeneratorConfig, generate


def make_listing(id: int = 0, **changes) -> RawListing:
    values = dict(
        id=id,
        price=392000.0,
        sale_date=datetime.date(2018, 3, 14),
        latitude=53.3302,
        longitude=-6.2389,
        neighbourhood="Dublin 4",
        baths=2,
        beds=3,
        ber="C",
        description="Bright terraced house with a south facing garden.",
        size=100.0,
        property_type="Terraced House",
        postcode_given="D4",
        postcode_corrected=None,
    )
    values.update(changes)
    return RawListing(**values)


@pytest.fixture(scope="session")
def small_generation():
    return generate(GeneratorConfig.default(seed=11, n_records=900))


@pytest.fixture(scope="session")
def small_records(small_generation):
    listings, _ = small_generation
    return clean(listings)


@pytest.fixture(scope="session")
def small_frame(small_records):
    return records_frame(small_records)


@pytest.fixture(scope="session")
def full_generation():
    return generate(GeneratorConfig.default(seed=5))


@pytest.fixture(scope="session")
def full_records(full_generation):
    listings, _ = full_generation
    return clean(listings)


@pytest.fixture
def listings_csv(tmp_path, small_generation):
    listings, _ = small_generation
    path = os.fspath(tmp_path / "listings.csv")
    write_listings(listings, path)
    return path


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
