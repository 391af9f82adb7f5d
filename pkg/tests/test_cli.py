# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

import json
import os

import pandas as pd
import pytest

from avm_flow import __version__
from avm_flow.cli import main
from avm_flow.fit import spec_names


def run(*argv):
    with pytest.raises(SystemExit) as info:
        main(list(argv))
    return info.value.code


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    (root / "home").mkdir()
    (root / ".avm").mkdir()
    (root / ".avm" / "config.json").write_text(
        json.dumps({"knots": {"spatial": 15, "size": 8, "ifsc": 8}, "spatial": {"rho": 6.0}}),
        encoding="UTF-8",
    )
    return root


@pytest.fixture
def project(workspace, monkeypatch):
    monkeypatch.setenv("HOME", os.fspath(workspace / "home"))
    monkeypatch.chdir(workspace)
    return workspace


@pytest.fixture
def synthetic(project):
    if not (project / "data" / "listings.csv").exists():
        assert run("synth", "--out", "data", "--n", "400", "--seed", "4", "--silent") == 0
    return project / "data"


def test_version(capsys, project):
    assert run("--version") == 0
    assert __version__ in capsys.readouterr().out


def test_missing_command_is_an_error(project):
    assert run() == 2


def test_synth_writes_listings_truth_and_manifest(synthetic):
    assert (synthetic / "listings.csv").exists()
    assert (synthetic / "truth.json").exists()
    manifest = json.loads((synthetic / "manifest.json").read_text(encoding="UTF-8"))
    assert manifest["command"] == "synth"
    assert manifest["config"]["seed"] == 4
    assert sorted(manifest["artifacts"]) == ["listings.csv", "truth.json"]


def test_identical_runs_give_identical_manifests(synthetic, project):
    assert run("synth", "--out", "again", "--n", "400", "--seed", "4", "--silent") == 0
    first = (synthetic / "manifest.json").read_bytes()
    second = (project / "again" / "manifest.json").read_bytes()
    assert first == second


def test_extract(synthetic, project):
    assert run("extract", "--input", "data/listings.csv", "--out", "extract", "--silent") == 0
    records = pd.read_csv(project / "extract" / "records.csv")
    assert len(records) == 400
    counts = pd.read_csv(project / "extract" / "feature_counts.csv")
    assert "parking" in counts["feature"].tolist()


def test_fit_then_predict(synthetic, project):
    assert run("fit", "--input", "data/listings.csv", "--spec", "GAM1", "--out", "gam1") == 0
    for name in ("model.json", "scalings.csv", "smooths.csv", "manifest.json"):
        assert (project / "gam1" / name).exists()
    smooths = pd.read_csv(project / "gam1" / "smooths.csv")
    assert set(smooths["term"]) == {"ifsc_km", "size", "beds"}

    assert (
        run("predict", "--model", "gam1/model.json", "--input", "data/listings.csv", "--out", "valued")
        == 0
    )
    predictions = pd.read_csv(project / "valued" / "predictions.csv")
    assert 0 < len(predictions) <= 400
    assert (predictions["price_lo95"] < predictions["price"]).all()


def test_predict_refuses_unseen_postcode(synthetic, project, capsys):
    listings = pd.read_csv(synthetic / "listings.csv")
    dropped = listings["postcode"].iloc[0]
    listings[listings["postcode"] != dropped].to_csv(project / "without.csv", index=False)
    assert (
        run("fit", "--input", "without.csv", "--spec", "BasicLinear", "--out", "without", "--silent")
        == 0
    )
    capsys.readouterr()

    assert (
        run("predict", "--model", "without/model.json", "--input", "data/listings.csv", "--out", "unseen")
        == 1
    )
    err = capsys.readouterr().err
    assert err.startswith(f"avm-flow: error: unseen-level: postcode: level '{dropped}'")
    assert not (project / "unseen" / "predictions.csv").exists()


def test_unknown_spec_is_reported(synthetic, capsys):
    assert run("fit", "--input", "data/listings.csv", "--spec", "GAM9", "--out", "bad") == 1
    err = capsys.readouterr().err
    assert err.startswith("avm-flow: error: spec: unknown spec 'GAM9'")


def test_missing_input_is_reported(project, capsys):
    assert run("extract", "--input", "nowhere.csv", "--out", "bad") == 1
    assert "avm-flow: error: input:" in capsys.readouterr().err


def test_cv_of_every_model_keeps_the_reporting_order(synthetic, project):
    assert (
        run(
            "cv",
            "--input",
            "data/listings.csv",
            "--spec",
            "all",
            "--postcodes",
            "corrected",
            "--folds",
            "2",
            "--silent",
            "--out",
            "cv",
        )
        == 0
    )
    report = pd.read_csv(project / "cv" / "report.csv")
    assert report["model"].tolist() == spec_names()
    assert report["postcodes"].tolist()[-2:] == ["corrected+changes"] * 2
    assert (project / "cv" / "bands_GAM6.csv").exists()
    predictions = pd.read_csv(project / "cv" / "predictions.csv")
    assert set(predictions["model"]) == set(spec_names())


def test_knn(synthetic, project):
    assert run("knn", "--input", "data/listings.csv", "--k", "3,5", "--out", "knn", "--silent") == 0
    table = pd.read_csv(project / "knn" / "knn.csv")
    assert table["k"].tolist() == [3, 5]


def test_surface_and_site_tax(synthetic, project):
    assert run("fit", "--input", "data/listings.csv", "--spec", "GAM3", "--out", "gam3", "--silent") == 0
    assert (
        run("surface", "--model", "gam3/model.json", "--resolution", "1", "--bands", "4", "--out", "surface")
        == 0
    )
    cells = pd.read_csv(project / "surface" / "surface.csv")
    assert cells["scaling"].min() == pytest.approx(1.0)
    assert set(cells["band"]) == {1, 2, 3, 4}

    sites = project / "sites.csv"
    sites.write_text(
        "site,latitude,longitude,site_size,n_apartments\n"
        "quay,53.3495,-6.2496,0.5,10\n"
        "house,53.3000,-6.2000,0.25,1\n",
        encoding="UTF-8",
    )
    assert (
        run(
            "svt",
            "--surface",
            "surface/surface.csv",
            "--sites",
            "sites.csv",
            "--baseline",
            "1000",
            "--out",
            "svt",
        )
        == 0
    )
    taxes = pd.read_csv(project / "svt" / "svt.csv")
    assert (taxes["scaling"] >= 1.0).all()
    assert taxes["apartment_tax"].iloc[0] == pytest.approx(taxes["site_tax"].iloc[0] / 10)


def test_surface_needs_a_spatial_model(synthetic, project, capsys):
    if not (project / "gam1" / "model.json").exists():
        assert run("fit", "--input", "data/listings.csv", "--spec", "GAM1", "--out", "gam1") == 0
    assert run("surface", "--model", "gam1/model.json", "--out", "nosurface") == 1
    assert "avm-flow: error: parameter:" in capsys.readouterr().err


def test_knots_sweep(synthetic, project):
    assert (
        run(
            "knots-sweep",
            "--input",
            "data/listings.csv",
            "--k",
            "5,10",
            "--folds",
            "2",
            "--silent",
            "--out",
            "sweep",
        )
        == 0
    )
    table = pd.read_csv(project / "sweep" / "sweep.csv")
    assert table["k"].tolist() == [5, 10]
    assert table["elbow"].sum() == 1
