# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

import json
import os

import pytest
import yaml

from avm_flow.api import env
from avm_flow.base.error import ConfigError
from avm_flow.base.plugins import get_path, load_data, merge_dicts


@pytest.fixture
def home(tmp_path, monkeypatch):
    path = tmp_path / "home"
    (path / ".config").mkdir(parents=True)
    monkeypatch.setenv("HOME", os.fspath(path))
    return path


def test_merge_recurses_into_sections():
    dst = {"knots": {"size": 20, "beds": 5}, "svt": {"resolution": 0.25}}
    merge_dicts(dst, {"knots": {"size": 8}, "svt": 3})
    assert dst == {"knots": {"size": 8, "beds": 5}, "svt": 3}


def test_dotted_paths():
    data = {"moran": {"neighbours": 6}}
    assert get_path(data, "moran.neighbours") == 6
    assert get_path(data, "moran.missing", 1) == 1
    assert get_path(data, "moran.neighbours.deeper", 2) == 2


def test_load_data_tries_every_extension(tmp_path):
    (tmp_path / "config.yml").write_text("knots:\n  size: 7\n", encoding="UTF-8")
    assert load_data(os.fspath(tmp_path / "config.json")) == {"knots": {"size": 7}}
    assert load_data(os.fspath(tmp_path / "absent.json")) == {}


def test_broken_config_is_reported(tmp_path):
    (tmp_path / "config.json").write_text("{not json", encoding="UTF-8")
    with pytest.raises(ConfigError):
        load_data(os.fspath(tmp_path / "config.json"))


def test_project_layer_overrides_user_layer(tmp_path, home):
    (home / ".config" / "avm-flow.json").write_text(
        json.dumps({"knots": {"size": 12, "beds": 4}, "moran": {"neighbours": 6}}),
        encoding="UTF-8",
    )
    project = tmp_path / "project"
    (project / ".avm").mkdir(parents=True)
    (project / ".avm" / "config.yml").write_text(
        yaml.safe_dump({"knots": {"size": 8}, "spatial": {"rho": 5.5}}), encoding="UTF-8"
    )

    config = env.AvmConfig(root=os.fspath(project))
    assert config.knots == {"size": 8, "beds": 4}
    assert config.moran_neighbours == 6
    assert config.spatial_rho == 5.5


def test_defaults_without_files(tmp_path, home):
    config = env.AvmConfig(root=os.fspath(tmp_path))
    assert config.knots == {}
    assert config.moran_neighbours == 10
    assert config.spatial_rho is None
    assert config.svt_resolution == 0.25
    assert config.svt_padding == 1.0
    assert config.svt_bands == 0
    assert config.lexicon_path is None


def test_unknown_knot_key_is_refused():
    config = env.AvmConfig.from_dict({"knots": {"ifsc": 8, "rooms": 4}})
    with pytest.raises(ConfigError, match="rooms"):
        config.knots


def test_non_numeric_setting_is_refused():
    config = env.AvmConfig.from_dict({"svt": {"resolution": "fine"}})
    with pytest.raises(ConfigError, match="svt.resolution"):
        config.svt_resolution


def test_paths_are_relative_to_the_root(tmp_path):
    config = env.AvmConfig.from_dict({"lexicon": "phrases.txt"}, root=os.fspath(tmp_path))
    assert config.lexicon_path == os.path.join(os.fspath(tmp_path), "phrases.txt")


def test_thresholds_must_be_a_mapping():
    with pytest.raises(ConfigError):
        env.AvmConfig.from_dict({"thresholds": [1, 2]}).thresholds


def test_run_manifest_names_inputs_by_base_name(tmp_path):
    source = tmp_path / "in" / "listings.csv"
    source.parent.mkdir()
    source.write_text("id\n", encoding="UTF-8")
    run = env.RunConfig("extract", os.fspath(tmp_path / "out"), inputs={"input": os.fspath(source)})
    with open(run.output("records.csv"), "w", encoding="UTF-8") as out:
        out.write("id\n")
    manifest = run.manifest()
    assert manifest["format"] == env.MANIFEST_FORMAT
    assert manifest["inputs"]["input"]["file"] == "listings.csv"
    assert manifest["inputs"]["input"]["sha256"] == env.sha256_of(os.fspath(source))
    assert list(manifest["artifacts"]) == ["records.csv"]
    path = run.write_manifest()
    assert os.path.basename(path) == "manifest.json"
