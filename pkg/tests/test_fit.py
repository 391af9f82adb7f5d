# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

import dataclasses
import json
import math
import os

import numpy as np
import pandas as pd
import pytest

from avm_flow.base.error import (
    EmptyLevelWarning,
    KnotCountWarning,
    ModelFormatError,
    ParameterError,
    SpecError,
    UnseenLevelError,
)
from avm_flow.dataio import clean
from avm_flow.fit import (
    POSTCODE_CHANGES,
    build_design,
    coefficient_scalings,
    fit_model,
    fit_penalized,
    load_model,
    penalized_gradient,
    penalized_objective,
    predict,
    predict_frame,
    premium,
    resolve_spec,
    save_model,
    smooth_effects,
    spec_names,
    specs_for_mode,
)
from avm_flow.synth import GeneratorConfig, generate

ALL_SPECS = ["BasicLinear", "Linear", "GAM1", "GAM2", "GAM3", "GAM4", "GAM5", "GAM6"]


@pytest.fixture(scope="module")
def gam1_design(small_records):
    return build_design(small_records, resolve_spec("GAM1"))


@pytest.fixture(scope="module")
def gam1(small_records):
    return fit_model(small_records, resolve_spec("GAM1"))


@pytest.fixture(scope="module")
def gam2(small_records):
    return fit_model(small_records, resolve_spec("GAM2", knots={"spatial": 30}, rho=6.0))


def test_specs_are_listed_in_reporting_order():
    assert spec_names() == ALL_SPECS
    assert specs_for_mode("given") == ALL_SPECS[:6]
    assert specs_for_mode("corrected") == ALL_SPECS


def test_unknown_spec_names_the_known_ones():
    with pytest.raises(SpecError, match="BasicLinear"):
        resolve_spec("GAM9")


def test_change_models_need_corrected_postcodes():
    with pytest.raises(SpecError):
        resolve_spec("GAM5", "given")

    spec = resolve_spec("GAM5", "corrected")
    assert spec.postcode_mode == "corrected+changes"
    assert len(spec.changes) == len(POSTCODE_CHANGES)
    assert "SCD.D18" in spec.changes


def test_postcode_mode_is_checked():
    with pytest.raises(SpecError):
        resolve_spec("GAM1", "guessed")


def test_gam1_terms_depend_on_postcode_mode():
    given = resolve_spec("GAM1", "given")
    corrected = resolve_spec("GAM1", "corrected")
    assert "baths" in given.linear_terms
    assert [s.covariate for s in given.smooth_terms] == ["ifsc_km", "size", "beds"]
    assert [s.covariate for s in corrected.smooth_terms] == ["ifsc_km", "size", "beds", "baths"]
    assert given.spatial is None
    assert given.postcode_column == "postcode"
    assert corrected.postcode_column == "postcode_true"


def test_knot_counts_can_be_overridden():
    spec = resolve_spec("GAM4", knots={"ifsc": 8, "spatial": 40}, rho=5.0, seed=3)
    counts = {term.covariate: term.k for term in spec.smooth_terms}
    assert counts["ifsc_km"] == 8
    assert counts["size"] == 20
    assert spec.spatial.k == 40
    assert spec.spatial.rho == 5.0
    assert spec.spatial.seed == 3


def test_design_blocks_cover_every_column(gam1_design):
    X, penalties, y, recipe = gam1_design
    assert X.shape == (y.size, recipe.n_columns)
    assert recipe.labels[0] == "(Intercept)"
    assert recipe.blocks[0].stop == 1
    for before, after in zip(recipe.blocks, recipe.blocks[1:]):
        assert before.stop == after.start
    assert [p.block for p in penalties] == ["s(ifsc_km)", "s(size)", "s(beds)"]


def test_smooth_columns_are_centred(gam1_design):
    X, penalties, _, recipe = gam1_design
    for penalty, smooth in zip(penalties, recipe.smooths):
        block = X[:, penalty.start : penalty.stop]
        assert block.shape[1] == smooth.knots.size - 1
        assert penalty.matrix.shape == (block.shape[1], block.shape[1])
        np.testing.assert_allclose(block.sum(axis=0), 0.0, atol=1e-8 * len(X))


def test_categorical_contrasts_are_sum_to_zero(gam1_design):
    X, _, _, recipe = gam1_design
    block = recipe.block("property_type")
    rows = X[:, block.columns]
    assert set(np.unique(rows)) <= {-1.0, 0.0, 1.0}


def test_fit_zeroes_the_penalized_gradient(gam1_design):
    X, penalties, y, _ = gam1_design
    result = fit_penalized(X, penalties, y)
    gradient = penalized_gradient(result.beta, X, y, penalties, result.lambdas)
    assert np.linalg.norm(gradient) <= 1e-4 * np.linalg.norm(2.0 * X.T @ y)


def test_fit_minimises_the_penalized_objective(gam1_design, rng):
    X, penalties, y, _ = gam1_design
    result = fit_penalized(X, penalties, y)
    best = penalized_objective(result.beta, X, y, penalties, result.lambdas)
    for _ in range(20):
        moved = result.beta + rng.normal(0.0, 1e-3, size=result.beta.size)
        assert penalized_objective(moved, X, y, penalties, result.lambdas) >= best


def test_unpenalized_fit_is_least_squares(small_records):
    X, penalties, y, _ = build_design(small_records, resolve_spec("BasicLinear"))
    assert penalties == []
    result = fit_penalized(X, penalties, y)
    expected = np.linalg.lstsq(X, y, rcond=None)[0]
    np.testing.assert_allclose(result.beta, expected, rtol=1e-6, atol=1e-8)
    assert result.trace == pytest.approx(X.shape[1], abs=1e-6)
    assert result.sigma2 == pytest.approx(result.rss / (len(y) - X.shape[1]))


def test_heavier_smoothing_uses_fewer_degrees_of_freedom(gam1_design):
    X, penalties, y, _ = gam1_design
    rough = fit_penalized(X, penalties, y, lambdas=[1e-6] * len(penalties))
    stiff = fit_penalized(X, penalties, y, lambdas=[1e6] * len(penalties))
    assert stiff.trace < rough.trace


def test_fixed_smoothing_parameters_are_checked(gam1_design):
    X, penalties, y, _ = gam1_design
    with pytest.raises(ParameterError):
        fit_penalized(X, penalties, y, lambdas=[1.0])
    with pytest.raises(ParameterError):
        fit_penalized(X, penalties, y, lambdas=[-1.0] * len(penalties))


def test_too_few_records_are_refused(small_records):
    X, penalties, y, _ = build_design(small_records, resolve_spec("BasicLinear"))
    with pytest.raises(ParameterError):
        fit_penalized(X[:5], penalties, y[:5])


def test_intercept_only_data_gives_the_median_back():
    listings, _ = generate(GeneratorConfig.intercept_only(seed=2, n_records=300))
    model = fit_model(clean(listings), resolve_spec("BasicLinear"))
    assert model.coefficients("intercept")[0] == pytest.approx(math.log(4405.0), abs=1e-8)
    scalings = coefficient_scalings(model)
    np.testing.assert_allclose(scalings["scaling"], 1.0, atol=1e-6)


def test_fitted_model_reports_its_terms(gam1):
    assert gam1.n > 800
    assert set(gam1.lambdas) == {"s(ifsc_km)", "s(size)", "s(beds)"}
    assert all(value >= 0 for value in gam1.lambdas.values())
    assert gam1.edf["intercept"] == pytest.approx(1.0, abs=1e-6)
    assert gam1.sigma2_hat > 0
    assert len(gam1.labels) == gam1.beta_hat.size


def test_prediction_intervals_are_nested(gam1, small_records):
    frame = predict_frame(gam1, small_records[:50])
    assert list(frame.columns[:4]) == ["id", "size", "log_point", "se"]
    assert (frame["lo95"] < frame["lo50"]).all()
    assert (frame["lo50"] < frame["log_point"]).all()
    assert (frame["log_point"] < frame["hi50"]).all()
    assert (frame["hi50"] < frame["hi95"]).all()
    ratio = (frame["hi95"] - frame["lo95"]) / (frame["hi50"] - frame["lo50"])
    np.testing.assert_allclose(ratio, 1.959964 / 0.6744898, rtol=1e-5)
    np.testing.assert_allclose(frame["price"], np.exp(frame["log_point"]) * frame["size"])
    assert (frame["se"] ** 2 > gam1.sigma2_hat).all()


def test_single_prediction_matches_the_frame(gam1, small_records):
    record = small_records[7]
    single = predict(gam1, record)
    row = predict_frame(gam1, [record]).iloc[0]
    assert single.id == record.id
    assert single.point == pytest.approx(row["log_point"])
    assert single.price_point == pytest.approx(row["price"])
    lo, hi = single.price_pi95
    assert lo < single.price_point < hi


def test_interval_levels_are_checked(gam1, small_records):
    with pytest.raises(ParameterError):
        predict_frame(gam1, small_records[:3], levels=(1.5,))


def test_unseen_level_is_reported(small_records):
    training = [record for record in small_records if record.ber != "G"]
    held_out = next(record for record in small_records if record.ber == "G")
    with pytest.warns(EmptyLevelWarning):
        model = fit_model(training, resolve_spec("BasicLinear"))
    with pytest.raises(UnseenLevelError) as info:
        predict(model, held_out)
    assert info.value.variable == "ber"
    assert info.value.level == "G"


def test_saved_model_predicts_identically(gam2, small_records, tmp_path):
    path = os.fspath(tmp_path / "model.json")
    save_model(gam2, path)
    loaded = load_model(path)
    assert loaded.spec == gam2.spec
    assert loaded.labels == gam2.labels
    pd.testing.assert_frame_equal(
        predict_frame(loaded, small_records), predict_frame(gam2, small_records), check_exact=True
    )


def test_model_documents_are_versioned(tmp_path):
    path = tmp_path / "model.json"
    path.write_text(json.dumps({"version": "avm-flow/model@0"}), encoding="UTF-8")
    with pytest.raises(ModelFormatError):
        load_model(os.fspath(path))
    with pytest.raises(ModelFormatError, match="not found"):
        load_model(os.fspath(tmp_path / "missing.json"))


def test_categorical_scalings_multiply_to_one(gam1):
    scalings = coefficient_scalings(gam1)
    for term in ("property_type", "ber", "postcode"):
        rows = scalings[scalings["term"] == term]
        assert np.log(rows["scaling"]).sum() == pytest.approx(0.0, abs=1e-10)
    assert (scalings["lower"] <= scalings["scaling"]).all()
    assert (scalings["scaling"] <= scalings["upper"]).all()


def test_premium_between_two_scalings():
    assert round(premium(1.16, 1.11)) == 4
    assert premium(1.0, 1.0) == 0.0
    assert round(premium(0.91, 0.88)) == 3
    assert round(premium(1.08, 0.94)) == 13
    assert premium(1.07, 1.0) == pytest.approx(6.542, abs=1e-3)
    with pytest.raises(ParameterError):
        premium(0.0, 1.0)
    with pytest.raises(ParameterError):
        premium(1.11, 1.16)


def test_smooth_effects_on_a_grid(gam1):
    grid = np.linspace(40.0, 200.0, 25)
    effects = smooth_effects(gam1, "size", grid)
    assert list(effects.columns) == ["x", "effect", "se", "lower", "upper"]
    assert len(effects) == 25
    assert (effects["lower"] <= effects["upper"]).all()
    with pytest.raises(ParameterError):
        smooth_effects(gam1, "baths", grid)


def test_two_valued_covariate_enters_linearly(small_frame, tmp_path):
    frame = small_frame.copy()
    frame["baths"] = np.where(frame["baths"] > 1, 2, 1)
    spec = resolve_spec("GAM3", knots={"spatial": 30}, rho=6.0)
    with pytest.warns(KnotCountWarning, match="linear"):
        model = fit_model(frame, spec)

    assert "baths" in model.recipe.linear
    assert [smooth.covariate for smooth in model.recipe.smooths] == ["size", "beds"]
    linear = coefficient_scalings(model)
    assert "baths" in linear.loc[linear["term"] == "linear", "level"].tolist()

    path = os.fspath(tmp_path / "model.json")
    save_model(model, path)
    pd.testing.assert_frame_equal(
        predict_frame(load_model(path), frame), predict_frame(model, frame), check_exact=True
    )


def test_unbounded_smoothing_leaves_straight_lines(gam1_design, small_records):
    X, penalties, y, _ = gam1_design
    scales = [
        np.linalg.norm(X[:, p.start : p.stop].T @ X[:, p.start : p.stop]) / np.linalg.norm(p.matrix)
        for p in penalties
    ]
    stiff = fit_penalized(X, penalties, y, lambdas=[1e9 * scale for scale in scales])
    for penalty in penalties:
        assert stiff.edf[penalty.start : penalty.stop].sum() == pytest.approx(1.0, abs=1e-3)

    gam1 = resolve_spec("GAM1")
    straight = dataclasses.replace(
        gam1,
        linear_terms=gam1.linear_terms + tuple(term.covariate for term in gam1.smooth_terms),
        smooth_terms=(),
    )
    L, _, _, _ = build_design(small_records, straight)
    ols = L @ np.linalg.lstsq(L, y, rcond=None)[0]
    np.testing.assert_allclose(X @ stiff.beta, ols, atol=1e-3)


def test_scaling_every_price_moves_only_the_intercept(small_generation, small_records):
    listings, _ = small_generation
    factor = 3.7
    scaled = clean([dataclasses.replace(item, price=item.price * factor) for item in listings])
    spec = resolve_spec("GAM3", knots={"spatial": 30}, rho=6.0)
    base = fit_model(small_records, spec)
    moved = fit_model(scaled, spec, lambdas=list(base.lambdas.values()))

    shift = moved.coefficients("intercept")[0] - base.coefficients("intercept")[0]
    assert shift == pytest.approx(math.log(factor), abs=1e-8)
    np.testing.assert_allclose(
        predict_frame(moved, small_records)["log_point"],
        predict_frame(base, small_records)["log_point"] + math.log(factor),
        atol=1e-8,
    )
    assert moved.sigma2_hat == pytest.approx(base.sigma2_hat, rel=1e-8)

    grid = np.linspace(60.0, 200.0, 15)
    np.testing.assert_allclose(
        smooth_effects(moved, "size", grid)["effect"],
        smooth_effects(base, "size", grid)["effect"],
        atol=1e-8,
    )
    before = coefficient_scalings(base)
    after = coefficient_scalings(moved)
    np.testing.assert_allclose(after["scaling"], before["scaling"], rtol=1e-8)


@pytest.mark.slow
def test_fit_recovers_planted_effects(full_generation, full_records):
    _, truth = full_generation
    model = fit_model(full_records, resolve_spec("GAM3", "corrected", rho=6.0))
    scalings = coefficient_scalings(model).set_index(["term", "level"])
    for variable in ("property_type", "ber"):
        for level in scalings.loc[variable].index:
            fitted = scalings.loc[(variable, level), "coefficient"]
            assert fitted == pytest.approx(truth.coefficient(variable, level), abs=0.1)
    parking = scalings.loc[("linear", "parking"), "coefficient"]
    assert parking == pytest.approx(truth.coefficient("parking", ""), abs=0.05)


@pytest.mark.slow
def test_intervals_cover_planted_effects_across_seeds():
    spec = resolve_spec("GAM3", "corrected", rho=6.0)
    covered = scored = 0
    premiums = []
    for seed in range(50):
        config = GeneratorConfig.default(seed=seed, n_records=2000).replace(mislabels=False)
        listings, truth = generate(config)
        scalings = coefficient_scalings(fit_model(clean(listings), spec))
        planted = truth.planted_counts()
        for row in scalings.itertuples():
            if row.term in ("property_type", "ber"):
                value = truth.coefficient(row.term, row.level)
            elif row.term == "linear" and planted.get(row.level, 0) >= 20:
                value = truth.coefficient(row.level, "")
            else:
                continue
            scored += 1
            covered += row.lower <= math.exp(value) <= row.upper

        types = scalings[scalings["term"] == "property_type"].set_index("level")["scaling"]
        premiums.append(premium(types["Detached House"], types["Semi-Detached House"]))

    assert covered / scored >= 0.9
    planted_premium = premium(
        config.type_scalings["Detached House"], config.type_scalings["Semi-Detached House"]
    )
    assert np.mean(premiums) == pytest.approx(planted_premium, abs=1.5)
