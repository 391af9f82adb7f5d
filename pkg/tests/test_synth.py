# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

import math
import os

import numpy as np
import pytest
import yaml

from avm_flow.base.error import ConfigError, ModelFormatError, ParameterError
from avm_flow.dataio import ingest
from avm_flow.dataio.schema import MIN_SIZE_M2, POSTCODES
from avm_flow.fit.specs import CHANGE_LABELS
from avm_flow.synth import (
    GeneratorConfig,
    GroundTruth,
    RegionMap,
    generate,
    write_synthetic,
)
from avm_flow.synth.config import APARTMENT_FEATURES


def test_default_configuration():
    config = GeneratorConfig.default()
    assert config.seed == 0
    assert config.n_records == 5208
    assert config.n_undersized == 77
    assert config.intercept == pytest.approx(math.log(4405.0))
    assert sum(config.type_effects().values()) == pytest.approx(0.0, abs=1e-12)
    assert min(config.type_effects(), key=config.type_effects().get) == "Duplex"
    assert max(config.ber_effects(), key=config.ber_effects().get) == "A"


def test_change_premium_sign():
    config = GeneratorConfig.default()
    assert config.change_effect("SCD.D18") == pytest.approx(0.03)
    assert config.change_effect("D11.D9") == pytest.approx(-0.03)


def test_user_file_overrides_single_keys(tmp_path):
    path = tmp_path / "generator.yml"
    path.write_text(
        yaml.safe_dump({"noise_sd": 0.2, "type_scalings": {"Duplex": 0.8}}), encoding="UTF-8"
    )
    config = GeneratorConfig.load(os.fspath(path), seed=9, n_records=100)
    assert config.noise_sd == 0.2
    assert config.type_scalings["Duplex"] == 0.8
    assert config.type_scalings["Detached House"] == 1.16
    assert (config.seed, config.n_records) == (9, 100)


def test_unknown_keys_are_refused(tmp_path):
    data = GeneratorConfig.default().as_dict()
    data["colour"] = "blue"
    with pytest.raises(ConfigError, match="colour"):
        GeneratorConfig.from_dict(data)


def test_frequencies_must_be_shares():
    config = GeneratorConfig.default()
    with pytest.raises(ParameterError):
        config.replace(phrase_frequencies={"parking": 1.5})
    with pytest.raises(ParameterError):
        config.replace(
            apartment_phrase_frequencies={name: 0.3 for name in APARTMENT_FEATURES}
        )
    with pytest.raises(ConfigError):
        config.replace(phrase_frequencies={"swimming_pool": 0.1})


def test_generation_is_deterministic():
    config = GeneratorConfig.default(seed=3, n_records=150)
    first, first_truth = generate(config)
    second, second_truth = generate(config)
    assert first == second
    assert first_truth.records.equals(second_truth.records)
    other, _ = generate(config.replace(seed=4))
    assert other != first


def test_generation_sizes(small_generation):
    listings, truth = small_generation
    assert len(listings) == 900 + 77
    undersized = set(truth.undersized_ids())
    assert len(undersized) == 77
    for listing in listings:
        assert (listing.size < MIN_SIZE_M2) == (listing.id in undersized)
        assert listing.size >= 20.0


def test_prices_follow_the_truth(small_generation):
    listings, truth = small_generation
    observed = np.array([math.log(item.price / item.size) for item in listings])
    expected = truth.noiseless_log_ppm2([item.id for item in listings]) + truth.records[
        "noise"
    ].to_numpy()
    np.testing.assert_allclose(observed, expected, atol=1e-10)


def test_noise_has_the_configured_spread(small_generation):
    _, truth = small_generation
    assert truth.records["noise"].std() == pytest.approx(0.12, rel=0.15)


def test_intercept_only_prices_are_the_median():
    listings, truth = generate(GeneratorConfig.intercept_only(n_records=200))
    assert len(listings) == 200
    for item in listings:
        assert item.price / item.size == pytest.approx(4405.0, rel=1e-12)
        assert item.postcode_given == item.postcode_corrected
    assert (truth.records["change"] == "").all()


def test_floor_features_are_exclusive_and_only_on_apartments(small_generation):
    _, truth = small_generation
    floors = truth.records[list(APARTMENT_FEATURES)]
    assert (floors.sum(axis=1) <= 1).all()
    assert (floors.sum(axis=1)[truth.records["property_type"] != "Apartment"] == 0).all()


def test_large_garden_implies_garden(small_generation):
    _, truth = small_generation
    records = truth.records
    assert (records.loc[records["large_garden"] == 1, "garden"] == 1).all()


def test_mislabels_follow_the_known_patterns(small_generation):
    listings, truth = small_generation
    records = truth.records
    labelled = records[records["change"] != ""]
    assert set(labelled["change"]) <= set(CHANGE_LABELS)
    assert (labelled["postcode_given"] != labelled["postcode_true"]).all()
    assert not labelled["undersized"].any()
    assert (labelled["change"] == "SCD.D18").sum() == round(101 * 900 / 5208)
    unlabelled = records[records["change"] == ""]
    assert (unlabelled["postcode_given"] == unlabelled["postcode_true"]).all()
    by_id = {item.id: item for item in listings}
    for row in labelled.itertuples():
        assert by_id[row.id].postcode_given == row.postcode_given
        assert by_id[row.id].postcode_corrected == row.postcode_true


def test_samples_stay_in_their_postcode(rng):
    regions = RegionMap()
    assert regions.region_of(regions.centroids).tolist() == list(range(len(POSTCODES)))
    for code in ("D1", "D15", "SCD"):
        points = regions.sample(rng, code, 40)
        assert points.shape == (40, 2)
        assert (regions.region_of(points) == POSTCODES.index(code)).all()
        assert regions.inside(points).all()


def test_synthetic_files_round_trip(small_generation, tmp_path):
    listings, truth = small_generation
    csv_path = os.fspath(tmp_path / "listings.csv")
    truth_path = os.fspath(tmp_path / "truth.json")
    write_synthetic(listings, truth, csv_path, truth_path)

    result = ingest(csv_path)
    assert result.rejects == []
    assert len(result.listings) == len(listings)

    loaded = GroundTruth.load(truth_path)
    assert loaded.config == truth.config
    np.testing.assert_allclose(loaded.noiseless_log_ppm2(), truth.noiseless_log_ppm2())
    assert loaded.undersized_ids() == truth.undersized_ids()


def test_truth_documents_are_versioned(tmp_path):
    path = tmp_path / "truth.json"
    path.write_text('{"format": "something-else"}', encoding="UTF-8")
    with pytest.raises(ModelFormatError):
        GroundTruth.load(os.fspath(path))
