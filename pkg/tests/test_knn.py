# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

import dataclasses
import warnings

import numpy as np
import pytest

from avm_flow.base.error import DegradedEstimateWarning, NoComparablesError
from avm_flow.dataio import clean
from avm_flow.knn import KS, knn_estimate, knn_evaluate
from conftest import make_listing


def _records(*listings):
    return clean(list(listings))


def test_nearest_same_type_records_are_used():
    records = _records(
        make_listing(0, latitude=53.3300),
        make_listing(1, latitude=53.3310, price=300000.0),
        make_listing(2, latitude=53.3320, price=400000.0),
        make_listing(3, latitude=53.3330, price=500000.0),
        make_listing(4, latitude=53.3301, property_type="Apartment", price=900000.0),
        make_listing(5, latitude=53.4000, price=100000.0),
    )
    estimate = knn_estimate(records[0], records, 3)
    assert estimate.neighbours_used == (1, 2, 3)
    assert estimate.ppm2_estimate == pytest.approx(4000.0)
    assert estimate.price_estimate == pytest.approx(400000.0)
    assert not estimate.degraded


def test_distance_ties_go_to_the_lower_id():
    records = _records(
        make_listing(0, latitude=53.3300),
        make_listing(7, latitude=53.3400, price=100000.0),
        make_listing(3, latitude=53.3400, price=200000.0),
        make_listing(5, latitude=53.3400, price=300000.0),
    )
    query = next(record for record in records if record.id == 0)
    estimate = knn_estimate(query, records, 2)
    assert estimate.neighbours_used == (3, 5)
    assert estimate.ppm2_estimate == pytest.approx(2500.0)


def test_query_is_never_its_own_neighbour():
    records = _records(make_listing(0), make_listing(1, latitude=53.35))
    assert knn_estimate(records[0], records, 3).neighbours_used == (1,)


def test_short_pool_degrades_with_a_warning():
    records = _records(make_listing(0), make_listing(1, latitude=53.35))
    with pytest.warns(DegradedEstimateWarning):
        estimate = knn_estimate(records[0], records, 3)
    assert estimate.degraded


def test_lone_type_has_no_comparables():
    records = _records(make_listing(0), make_listing(1, property_type="Duplex"))
    with pytest.raises(NoComparablesError) as info:
        knn_estimate(records[1], records, 3)
    assert info.value.property_type == "Duplex"


def test_tree_search_matches_brute_force(small_records):
    pool = small_records[:500]
    by_id = {record.id: record for record in pool}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegradedEstimateWarning)
        report = knn_evaluate(pool, KS)
        for row in report.estimates.itertuples():
            expected = knn_estimate(by_id[row.id], pool, row.k)
            assert row.ppm2_estimate == expected.ppm2_estimate
            assert row.price_estimate == pytest.approx(expected.price_estimate, rel=1e-12)


def test_pool_order_does_not_matter(small_records, rng):
    pool = small_records[:300]
    shuffled = [pool[i] for i in rng.permutation(len(pool))]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegradedEstimateWarning)
        for query in pool[:40]:
            assert knn_estimate(query, shuffled, 5) == knn_estimate(query, pool, 5)


def test_estimates_scale_with_prices(small_records):
    pool = small_records[:300]
    # a power of two keeps every product exact
    scaled = [dataclasses.replace(record, price=record.price * 4.0) for record in pool]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegradedEstimateWarning)
        for query, twin in zip(pool[:40], scaled[:40]):
            plain = knn_estimate(query, pool, 7)
            moved = knn_estimate(twin, scaled, 7)
            assert moved.neighbours_used == plain.neighbours_used
            assert moved.ppm2_estimate == 4.0 * plain.ppm2_estimate
            assert moved.price_estimate == 4.0 * plain.price_estimate


def test_evaluation_table_has_a_row_per_k(small_records):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegradedEstimateWarning)
        report = knn_evaluate(small_records, (9, 3))
    assert report.table["k"].tolist() == [3, 9]
    assert (report.table["n"] == len(small_records) - report.excluded).all()
    assert ((report.table["mdape"] > 0) & (report.table["mdape"] < 1)).all()
    assert (report.table["within10"] <= report.table["within20"]).all()
    assert report.estimates["k"].is_monotonic_increasing


def test_singleton_types_are_excluded():
    records = _records(
        make_listing(0),
        make_listing(1, latitude=53.335),
        make_listing(2, latitude=53.34),
        make_listing(3, property_type="Townhouse"),
    )
    with pytest.warns(DegradedEstimateWarning):
        report = knn_evaluate(records, (1,))
    assert report.excluded == 1
    assert sorted(report.estimates["id"]) == [0, 1, 2]
    np.testing.assert_allclose(report.estimates["price_estimate"], 392000.0)
