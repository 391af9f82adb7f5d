# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

import math

import numpy as np
import pytest

from avm_flow.base.error import ParameterError, SweepSkipWarning
from avm_flow.dataio import clean
from avm_flow.eval import (
    BAND_EDGES,
    SpatialWeights,
    band_labels,
    band_table,
    coverage,
    fold_assignment,
    kfold_cv,
    knot_sweep,
    metrics,
    morans_i,
    morans_i_test,
    relative_errors,
    report_table,
)
from avm_flow.fit import resolve_spec
from avm_flow.synth import GeneratorConfig, generate


def test_metrics_by_hand():
    actual = [100.0, 200.0, 400.0, 1000.0]
    predicted = [110.0, 190.0, 300.0, 1000.0]
    result = metrics(actual, predicted)
    assert result.n == 4
    assert result.mdape == pytest.approx(0.075)
    assert result.within5 == pytest.approx(0.5)
    assert result.within10 == pytest.approx(0.75)
    assert result.within20 == pytest.approx(0.75)
    assert result.rmse == pytest.approx(math.sqrt((100 + 100 + 10000) / 4))
    tss = np.sum((np.array(actual) - 425.0) ** 2)
    assert result.r2 == pytest.approx(1 - 10200 / tss)
    assert math.isnan(result.coverage95)


def test_metrics_match_a_direct_computation(rng):
    for _ in range(1000):
        n = int(rng.integers(2, 60))
        actual = rng.uniform(1e5, 2e6, n)
        predicted = actual * rng.lognormal(0.0, 0.15, n)
        result = metrics(actual, predicted)

        errors = np.abs(actual - predicted) / actual
        rss = np.sum((actual - predicted) ** 2)
        tss = np.sum((actual - actual.mean()) ** 2)
        assert result.n == n
        assert result.r2 == pytest.approx(1.0 - rss / tss, abs=1e-12)
        assert result.rmse == pytest.approx(math.sqrt(rss / n), rel=1e-12)
        assert result.mdape == pytest.approx(np.median(errors), abs=1e-12)
        shares = (result.within5, result.within10, result.within20)
        for limit, share in zip((0.05, 0.10, 0.20), shares):
            assert share == pytest.approx(np.mean(errors <= limit), abs=1e-12)


def test_perfect_predictions():
    result = metrics([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
    assert result.r2 == 1.0
    assert result.rmse == 0.0
    assert result.mdape == 0.0
    assert result.within5 == 1.0


def test_within_counts_the_boundary():
    assert metrics([100.0], [110.0]).within10 == 1.0


def test_errors_relative_to_prediction():
    np.testing.assert_allclose(relative_errors([100.0], [80.0], "predicted"), [0.25])
    with pytest.raises(ParameterError):
        relative_errors([100.0], [80.0], "median")
    with pytest.raises(ParameterError):
        relative_errors([0.0], [80.0])


def test_coverage_of_intervals():
    actual = [1.0, 2.0, 3.0, 4.0]
    assert coverage(actual, [0.0, 2.0, 3.5, 0.0], [1.0, 3.0, 4.0, 3.0]) == 0.5
    result = metrics(actual, actual, intervals={0.95: ([0, 0, 0, 0], [9, 9, 9, 9])})
    assert result.coverage95 == 1.0


def test_empty_metrics_are_refused():
    with pytest.raises(ParameterError):
        metrics([], [])


def test_band_labels_follow_the_edges():
    labels = band_labels()
    assert len(labels) == len(BAND_EDGES)
    assert labels[0] == "Under €250,000"
    assert labels[1] == "€250,001 - €300,000"
    assert labels[-1] == "€3,500,001 - €5,000,000"


def test_band_table_assigns_upper_edges_inclusively():
    actual = [250_000.0, 250_001.0, 260_000.0, 6_000_000.0]
    predicted = [250_000.0, 275_001.0, 260_000.0, 6_000_000.0]
    table = band_table(actual, predicted)
    assert table["band"].iloc[-1] == "Over €5,000,000"
    assert table["count"].tolist()[:2] == [1, 2]
    assert table["count"].sum() == 4
    assert table["mdape"].iloc[1] == pytest.approx(0.05, abs=1e-6)
    assert math.isnan(table["mdape"].iloc[2])
    assert table["cumulative_mdape"].iloc[1] == pytest.approx(0.0)


def test_band_counts_match_a_direct_computation(rng):
    actual = np.exp(rng.uniform(np.log(1e5), np.log(6e6), 1000))
    actual[:3] = [250_000.0, 250_001.0, 5_000_000.0]
    predicted = actual * rng.lognormal(0.0, 0.1, actual.size)
    table = band_table(actual, predicted)
    errors = np.abs(actual - predicted) / actual

    lowers = [0.0, *BAND_EDGES]
    uppers = [*BAND_EDGES, np.inf]
    assert len(table) == len(lowers)
    for index, (lower, upper) in enumerate(zip(lowers, uppers)):
        row = table.iloc[index]
        inside = (actual > lower) & (actual <= upper)
        assert row["count"] == int(inside.sum())
        if inside.any():
            assert row["mdape"] == pytest.approx(np.median(errors[inside]), abs=1e-12)
        assert row["cumulative_mdape"] == pytest.approx(
            np.median(errors[actual <= upper]), abs=1e-12
        )
    assert table["count"].sum() == actual.size


def test_band_table_without_luxury_prices():
    table = band_table([300_000.0], [300_000.0])
    assert len(table) == len(BAND_EDGES)
    assert table["count"].sum() == 1


def _line(n):
    coords = np.column_stack([np.arange(n, dtype=float), np.zeros(n)])
    return SpatialWeights.from_neighbours(coords, k=2)


def test_weights_exclude_self_and_are_row_standardised():
    weights = _line(6)
    for index in range(6):
        neighbours, values = weights.neighbours(index)
        assert index not in neighbours
        assert len(neighbours) == 2
        assert sum(values) == pytest.approx(1.0)


def test_self_neighbour_is_refused():
    with pytest.raises(ParameterError):
        SpatialWeights.from_lists([[0, 1], [0]])


def test_morans_i_by_hand():
    weights = SpatialWeights.from_lists([[1], [0, 2], [1, 3], [2]], row_standardize=False)
    e = np.array([1.0, 2.0, 3.0, 4.0])
    centred = e - e.mean()
    cross = 2 * (centred[0] * centred[1] + centred[1] * centred[2] + centred[2] * centred[3])
    expected = 4 / 6 * cross / np.sum(centred**2)
    assert morans_i(e, weights) == pytest.approx(expected)


def test_morans_i_orders_smooth_and_rough_patterns(rng):
    n = 60
    weights = _line(n)
    smooth = np.sin(np.linspace(0, np.pi, n))
    alternating = np.array([(-1.0) ** i for i in range(n)])
    noise = rng.normal(size=n)
    assert morans_i(smooth, weights) > morans_i(noise, weights) > morans_i(alternating, weights)
    assert morans_i(smooth, weights) > 0.8
    assert morans_i(alternating, weights) < -0.8


def test_morans_i_needs_variation():
    with pytest.raises(ParameterError):
        morans_i(np.ones(5), _line(5))
    with pytest.raises(ParameterError):
        morans_i([1.0, 2.0, 3.0], _line(4))


def test_permutation_inference_is_seeded():
    weights = _line(40)
    values = np.linspace(0.0, 1.0, 40)
    first = morans_i_test(values, weights, permutations=199, seed=4)
    second = morans_i_test(values, weights, permutations=199, seed=4)
    assert first == second
    assert first.p_value == pytest.approx(1 / 200)
    assert first.expected == pytest.approx(-1 / 39)
    assert first.z > 3


def test_permutation_mean_sits_at_the_null_expectation(rng):
    coords = rng.uniform(0.0, 10.0, (300, 2))
    weights = SpatialWeights.from_neighbours(coords)
    result = morans_i_test(rng.normal(size=300), weights, permutations=999, seed=5)
    assert result.expected == pytest.approx(-1 / 299)
    assert result.mean == pytest.approx(result.expected, abs=0.003)


def test_folds_depend_only_on_ids_and_seed():
    ids = np.arange(100)
    shuffled = ids[::-1].copy()
    first = fold_assignment(ids, 5, seed=3)
    second = fold_assignment(shuffled, 5, seed=3)
    np.testing.assert_array_equal(first, second[::-1])
    assert np.bincount(first).tolist() == [20] * 5
    assert not np.array_equal(first, fold_assignment(ids, 5, seed=4))


@pytest.fixture(scope="module")
def linear_cv(small_records):
    return kfold_cv(small_records, resolve_spec("Linear"), folds=5, seed=1)


def test_every_record_is_predicted_once(linear_cv, small_records):
    predictions = linear_cv.predictions
    assert len(predictions) + linear_cv.excluded == len(small_records)
    assert predictions["id"].is_unique
    assert predictions["id"].is_monotonic_increasing
    assert set(predictions["fold"]) == set(range(5))


def test_cross_validation_is_reproducible(linear_cv, small_records):
    again = kfold_cv(small_records, resolve_spec("Linear"), folds=5, seed=1, jobs=3)
    assert again.metrics == linear_cv.metrics
    assert again.morans_i == linear_cv.morans_i


def test_cross_validation_scores_look_sane(linear_cv):
    assert 0 < linear_cv.r2 < 1
    assert 0 < linear_cv.mdape < 0.5
    assert 0.3 < linear_cv.coverage50 < 0.7
    assert 0.85 < linear_cv.coverage95 <= 1.0


def test_report_table_keeps_model_order(linear_cv):
    table = report_table([linear_cv, linear_cv])
    assert table.columns[0] == "model"
    assert table["model"].tolist() == ["Linear", "Linear"]
    assert table["postcodes"].iloc[0] == "given"


def test_cross_validation_arguments_are_checked(small_records):
    with pytest.raises(ParameterError):
        kfold_cv(small_records, resolve_spec("Linear"), folds=1)
    with pytest.raises(ParameterError):
        kfold_cv(small_records[:30], resolve_spec("Linear"), folds=5)


def test_sweep_needs_a_spatial_term(small_records):
    with pytest.raises(ParameterError):
        knot_sweep(small_records, resolve_spec("GAM1"), [10, 20])
    with pytest.raises(ParameterError):
        knot_sweep(small_records, resolve_spec("GAM3"), [20, 10])


def test_sweep_marks_the_elbow(small_records):
    spec = resolve_spec("GAM3", rho=6.0)
    with pytest.warns(SweepSkipWarning):
        result = knot_sweep(small_records, spec, [5, 15, 100_000], folds=3, seed=2)
    assert result.table["k"].tolist() == [5, 15]
    assert result.elbow in (5, 15)
    assert result.table["elbow"].sum() == 1
    best = result.table["r2"].iloc[-1]
    chosen = result.table.loc[result.table["elbow"], "r2"].iloc[0]
    assert chosen >= best - 0.005


@pytest.mark.slow
def test_gam3_intervals_are_calibrated(full_records):
    report = kfold_cv(full_records, resolve_spec("GAM3", "corrected", rho=6.0), seed=0, jobs=5)
    assert 0.93 <= report.coverage95 <= 0.97
    assert 0.45 <= report.coverage50 <= 0.55


@pytest.mark.slow
def test_location_term_removes_residual_autocorrelation():
    for seed in range(10):
        listings, _ = generate(GeneratorConfig.default(seed=seed, n_records=2500))
        records = clean(listings)
        gam3 = kfold_cv(records, resolve_spec("GAM3", rho=6.0), seed=seed, jobs=5)
        linear = kfold_cv(records, resolve_spec("Linear"), seed=seed, jobs=5)
        assert gam3.mdape < linear.mdape, seed
        assert abs(gam3.morans_i) < abs(linear.morans_i), seed
        assert abs(gam3.morans_i) < 0.05, seed
