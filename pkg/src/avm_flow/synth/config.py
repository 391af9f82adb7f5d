# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.synth.config** holds the knobs of the synthetic generator.
Defaults come from the bundled ``generator.yml``; a user file passed to
``synth --config`` is merged over them key by key.
"""

import copy
import dataclasses
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

from avm_flow import resources
from avm_flow.base.error import ConfigError, ParameterError
from avm_flow.base.plugins import load_document, merge_dicts
from avm_flow.dataio.schema import BER_LABELS, PROPERTY_TYPES
from avm_flow.textmine import FEATURES, FLAGS

APARTMENT_FEATURES: Tuple[str, ...] = (
    "ground_floor_apartment",
    "first_floor_apartment",
    "second_floor_apartment",
    "penthouse_apartment",
)

SMOOTHED: Tuple[str, ...] = ("beds", "baths", "size")

SURFACE_KEYS: Tuple[str, ...] = (
    "rho",
    "spacing",
    "source_sd",
    "east",
    "north",
    "radial",
)


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int
    n_records: int
    n_undersized: int
    median_ppm2: float
    noise_sd: float
    type_scalings: Dict[str, float]
    ber_scalings: Dict[str, float]
    ber_mix: Dict[str, float]
    feature_scalings: Dict[str, float]
    phrase_frequencies: Dict[str, float]
    apartment_phrase_frequencies: Dict[str, float]
    smooths: Dict[str, float]
    sizes: Dict[str, float]
    size_spread: float
    surface: Dict[str, float]
    mislabels: bool
    change_premium: float
    negative_changes: Tuple[str, ...]

    def __post_init__(self):
        _validate(self)

    @property
    def intercept(self) -> float:
        return math.log(self.median_ppm2)

    def type_effects(self) -> Dict[str, float]:
        return _centred_logs(self.type_scalings, PROPERTY_TYPES)

    def ber_effects(self) -> Dict[str, float]:
        return _centred_logs(self.ber_scalings, BER_LABELS)

    def feature_effects(self) -> Dict[str, float]:
        return {name: math.log(self.feature_scalings.get(name, 1.0)) for name in FLAGS}

    def change_effect(self, label: str) -> float:
        sign = -1.0 if label in self.negative_changes else 1.0
        return sign * self.change_premium

    def as_dict(self) -> Dict[str, Any]:
        data = dataclasses.asdict(self)
        data["negative_changes"] = list(self.negative_changes)
        return data

    def replace(self, **changes) -> "GeneratorConfig":
        return dataclasses.replace(self, **changes)

    @staticmethod
    def from_dict(data: Dict[str, Any]) -> "GeneratorConfig":
        names = {field.name for field in dataclasses.fields(GeneratorConfig)}
        unknown = sorted(set(data) - names)
        if unknown:
            raise ConfigError(f"generator: unknown key(s) {', '.join(unknown)}")
        missing = sorted(names - set(data))
        if missing:
            raise ConfigError(f"generator: missing key(s) {', '.join(missing)}")

        values = copy.deepcopy(data)
        try:
            values["seed"] = int(values["seed"])
            values["n_records"] = int(values["n_records"])
            values["n_undersized"] = int(values["n_undersized"])
            values["mislabels"] = bool(values["mislabels"])
            values["negative_changes"] = tuple(values["negative_changes"] or ())
            for key in ("median_ppm2", "noise_sd", "size_spread", "change_premium"):
                values[key] = float(values[key])
            for key in (
                "type_scalings",
                "ber_scalings",
                "ber_mix",
                "feature_scalings",
                "phrase_frequencies",
                "apartment_phrase_frequencies",
                "smooths",
                "sizes",
                "surface",
            ):
                values[key] = {str(k): float(v) for k, v in (values[key] or {}).items()}
        except (TypeError, ValueError, AttributeError) as ex:
            raise ConfigError(f"generator: {ex}") from ex
        return GeneratorConfig(**values)

    @staticmethod
    def load(
        path: Optional[str] = None,
        seed: Optional[int] = None,
        n_records: Optional[int] = None,
    ) -> "GeneratorConfig":
        """
        Bundled defaults, overlaid with the file at ``path`` and then with
        the explicit ``seed`` and ``n_records``.
        """

        data = load_document(resources.path_of(resources.GENERATOR))
        if path is not None:
            user = load_document(path)
            if not isinstance(user, dict):
                raise ConfigError(f"{path}: expected a mapping")
            merge_dicts(data, user)
        if seed is not None:
            data["seed"] = seed
        if n_records is not None:
            data["n_records"] = n_records
        return GeneratorConfig.from_dict(data)

    @staticmethod
    def default(seed: int = 0, n_records: Optional[int] = None) -> "GeneratorConfig":
        return GeneratorConfig.load(seed=seed, n_records=n_records)

    @staticmethod
    def intercept_only(seed: int = 0, n_records: int = 200) -> "GeneratorConfig":
        """Every effect switched off: all prices per m² equal the median."""

        config = GeneratorConfig.default(seed=seed, n_records=n_records)
        return config.replace(
            n_undersized=0,
            noise_sd=0.0,
            type_scalings={name: 1.0 for name in PROPERTY_TYPES},
            ber_scalings={name: 1.0 for name in BER_LABELS},
            feature_scalings={},
            smooths={name: 0.0 for name in SMOOTHED},
            surface={**config.surface, "source_sd": 0.0, "east": 0.0, "north": 0.0, "radial": 0.0},
            mislabels=False,
            change_premium=0.0,
        )


def _centred_logs(scalings: Dict[str, float], levels: Tuple[str, ...]) -> Dict[str, float]:
    logs = {name: math.log(scalings[name]) for name in levels}
    if all(value == 0.0 for value in logs.values()):
        return logs
    mean = sum(logs.values()) / len(logs)
    return {name: value - mean for name, value in logs.items()}


def _check_frequencies(section: str, frequencies: Dict[str, float], allowed):
    for name, value in frequencies.items():
        if name not in allowed:
            raise ConfigError(f"generator: {section}: unknown feature '{name}'")
        if not 0.0 <= value <= 1.0:
            raise ParameterError(
                f"generator: {section}.{name} must lie in [0, 1], got {value}"
            )


def _check_positive(section: str, values: Dict[str, float], levels):
    for name in levels:
        if name not in values:
            raise ConfigError(f"generator: {section}: missing '{name}'")
        if not values[name] > 0:
            raise ParameterError(f"generator: {section}.{name} must be positive")


def _validate(config: GeneratorConfig):
    if config.n_records < 1:
        raise ParameterError("generator: n_records must be at least 1")
    if config.n_undersized < 0:
        raise ParameterError("generator: n_undersized must not be negative")
    if not config.median_ppm2 > 0:
        raise ParameterError("generator: median_ppm2 must be positive")
    if config.noise_sd < 0 or config.size_spread < 0:
        raise ParameterError("generator: spreads must not be negative")

    _check_positive("type_scalings", config.type_scalings, PROPERTY_TYPES)
    _check_positive("ber_scalings", config.ber_scalings, BER_LABELS)
    _check_positive("sizes", config.sizes, PROPERTY_TYPES)
    _check_positive("feature_scalings", config.feature_scalings, config.feature_scalings)
    unknown = sorted(set(config.feature_scalings) - set(FLAGS))
    if unknown:
        raise ConfigError(f"generator: feature_scalings: unknown '{unknown[0]}'")

    for name in BER_LABELS:
        if config.ber_mix.get(name, -1.0) < 0:
            raise ParameterError(f"generator: ber_mix.{name} must be given and non-negative")
    if not sum(config.ber_mix.values()) > 0:
        raise ParameterError("generator: ber_mix must not be all zero")

    general = [name for name in FEATURES if name not in APARTMENT_FEATURES]
    _check_frequencies("phrase_frequencies", config.phrase_frequencies, general)
    _check_frequencies(
        "apartment_phrase_frequencies",
        config.apartment_phrase_frequencies,
        APARTMENT_FEATURES,
    )
    if sum(config.apartment_phrase_frequencies.values()) > 1.0:
        raise ParameterError("generator: apartment floor frequencies add up to more than 1")

    for name in SMOOTHED:
        if name not in config.smooths:
            raise ConfigError(f"generator: smooths: missing '{name}'")
    for name in SURFACE_KEYS:
        if name not in config.surface:
            raise ConfigError(f"generator: surface: missing '{name}'")
    if not config.surface["rho"] > 0 or not config.surface["spacing"] > 0:
        raise ParameterError("generator: surface rho and spacing must be positive")
    if config.surface["source_sd"] < 0:
        raise ParameterError("generator: surface.source_sd must not be negative")
