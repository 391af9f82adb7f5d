# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.api.env** provides interaction with the run environment:

- :class:`AvmConfig` loads the user and project config in
  ``~/.config/avm-flow.yml`` and ``.avm/config.yml``.
- :class:`Runtime` prints messages, while respecting ``--silent`` and
  ``--verbose``, and reports library warnings.
- :class:`RunConfig` describes a single command run and writes its manifest.
"""

import argparse
import contextlib
import hashlib
import importlib
import json
import os
import sys
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Union, cast

from avm_flow import __version__
from avm_flow.base import plugins
from avm_flow.base.error import AvmWarning, ConfigError
from avm_flow.fit.specs import DEFAULT_KNOTS, KNOT_KEYS
from avm_flow.geo.landmarks import LandmarkSet
from avm_flow.textmine import PhraseLexicon

MANIFEST_FORMAT = "avm-flow/manifest@1"
MANIFEST = "manifest.json"


def _layer(cfg: dict, path: str):
    config = plugins.load_data(path)
    if config:
        plugins.merge_dicts(cfg, config)


class AvmConfig:
    _cfg: dict
    root: str

    def __init__(self, cfg: Optional["AvmConfig"] = None, root: str = "."):
        if cfg is not None:
            self._cfg = cfg._cfg
            self.root = cfg.root
            return

        self.root = os.path.abspath(root)
        dest: dict = {}
        _layer(dest, os.path.join(os.path.expanduser("~"), ".config", "avm-flow.json"))
        _layer(dest, os.path.join(self.root, ".avm", "config.json"))
        self._cfg = dest
        self._load_extensions()

    @staticmethod
    def from_dict(data: dict, root: str = ".") -> "AvmConfig":
        config = AvmConfig.__new__(AvmConfig)
        config._cfg = data
        config.root = os.path.abspath(root)
        return config

    def _load_extensions(self):
        extensions = list(cast(List[str], self._cfg.get("extensions", [])))
        extensions.insert(0, "avm_flow.commands")

        local_extensions = os.path.join(self.root, ".avm", "extensions")
        if os.path.isdir(local_extensions):
            sys.path.insert(0, local_extensions)

        for extension in extensions:
            try:
                importlib.import_module(extension)
            except ModuleNotFoundError:
                print(
                    f"-- error: module `{extension}` was not found, ignoring",
                    file=sys.stderr,
                )

    def get(self, key: str, default: Any = None) -> Any:
        return plugins.get_path(self._cfg, key, default)

    def _path(self, key: str) -> Optional[str]:
        value = self.get(key)
        if value is None:
            return None
        return os.path.join(self.root, os.path.expanduser(str(value)))

    def _number(self, key: str, default: float, kind: Callable[[Any], Any] = float):
        value = self.get(key, default)
        try:
            return kind(value)
        except (TypeError, ValueError) as ex:
            raise ConfigError(f"{key}: expected a number, got {value!r}") from ex

    @property
    def lexicon_path(self) -> Optional[str]:
        return self._path("lexicon")

    @property
    def landmarks_path(self) -> Optional[str]:
        return self._path("landmarks")

    @property
    def thresholds(self) -> Dict[str, Optional[float]]:
        value = self.get("thresholds", {})
        if not isinstance(value, dict):
            raise ConfigError("thresholds: expected a mapping of landmark class to km")
        return value

    def lexicon(self) -> PhraseLexicon:
        return PhraseLexicon.load(self.lexicon_path)

    def landmarks(self) -> LandmarkSet:
        return LandmarkSet.load(self.landmarks_path, thresholds=self.thresholds)

    @property
    def moran_neighbours(self) -> int:
        return self._number("moran.neighbours", 10, int)

    @property
    def knots(self) -> Dict[str, int]:
        names = [KNOT_KEYS.get(name, name) for name in DEFAULT_KNOTS]
        section = self.get("knots", {})
        if not isinstance(section, dict):
            raise ConfigError("knots: expected a mapping")
        unknown = sorted(set(section) - set(names))
        if unknown:
            raise ConfigError(f"knots: unknown key(s) {', '.join(unknown)}")
        return {name: self._number(f"knots.{name}", 0, int) for name in section}

    @property
    def spatial_rho(self) -> Optional[float]:
        if self.get("spatial.rho") is None:
            return None
        return self._number("spatial.rho", 0.0)

    @property
    def svt_resolution(self) -> float:
        return self._number("svt.resolution", 0.25)

    @property
    def svt_padding(self) -> float:
        return self._number("svt.padding", 1.0)

    @property
    def svt_bands(self) -> int:
        return self._number("svt.bands", 0, int)


class Msg(Enum):
    """Message level for Runtime.message"""

    DEBUG = 0
    """Print only, when verbose is set"""

    STATUS = 2
    """Print when silent if not set"""

    ALWAYS = 3
    """Print always"""


MSG_GUARD: Dict[Msg, Callable[["Runtime"], bool]] = {
    Msg.DEBUG: lambda rt: rt.verbose,
    Msg.STATUS: lambda rt: not rt.silent,
    Msg.ALWAYS: lambda rt: True,
}


class Runtime(AvmConfig):
    silent: bool
    verbose: bool

    def __init__(self, argsOrRuntime: Union[argparse.Namespace, "Runtime"], cfg: AvmConfig):
        super().__init__(cfg=cfg)
        self.silent = getattr(argsOrRuntime, "silent", False)
        self.verbose = getattr(argsOrRuntime, "verbose", False)

    def message(self, *args: str, level=Msg.DEBUG, **kwargs):
        if not MSG_GUARD[level](self):
            return

        print("--", *args, **kwargs, file=sys.stderr)

    def _show_warning(self, message, category, filename, lineno, file=None, line=None):
        self.message("warning:", str(message), level=Msg.STATUS)

    @contextlib.contextmanager
    def reporting_warnings(self):
        """Routes library warnings raised inside the block to :meth:`message`."""

        with warnings.catch_warnings():
            warnings.simplefilter("always", AvmWarning)
            warnings.showwarning = self._show_warning
            yield


def sha256_of(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as src:
        for chunk in iter(lambda: src.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass
class RunConfig:
    """
    One command run: the command name, its named input files, the model and
    postcode choice, the seed, the output directory and any further options.
    Inputs and artifacts are hashed into ``manifest.json`` under their base
    names, so identical runs give byte-identical manifests wherever they
    are run.
    """

    command: str
    out: str
    inputs: Dict[str, str] = field(default_factory=dict)
    spec: Optional[str] = None
    postcode_mode: Optional[str] = None
    seed: Optional[int] = None
    options: Dict[str, Any] = field(default_factory=dict)
    artifacts: List[str] = field(default_factory=list)

    def output(self, name: str) -> str:
        os.makedirs(self.out, exist_ok=True)
        path = os.path.join(self.out, name)
        if name not in self.artifacts:
            self.artifacts.append(name)
        return path

    def manifest(self) -> Dict[str, Any]:
        return {
            "format": MANIFEST_FORMAT,
            "version": __version__,
            "command": self.command,
            "config": {
                "spec": self.spec,
                "postcode_mode": self.postcode_mode,
                "seed": self.seed,
                "options": self.options,
            },
            "inputs": {
                name: {"file": os.path.basename(path), "sha256": sha256_of(path)}
                for name, path in sorted(self.inputs.items())
            },
            "artifacts": {
                name: sha256_of(os.path.join(self.out, name))
                for name in sorted(self.artifacts)
            },
        }

    def write_manifest(self) -> str:
        os.makedirs(self.out, exist_ok=True)
        path = os.path.join(self.out, MANIFEST)
        with open(path, "w", encoding="UTF-8", newline="\n") as out:
            json.dump(self.manifest(), out, indent=1, sort_keys=True)
            out.write("\n")
        return path
