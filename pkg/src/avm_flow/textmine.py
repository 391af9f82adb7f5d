# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.textmine** extracts binary attributes from free-text listing
descriptions with a plain, case-insensitive substring search.

The phrase lexicon is a text file with one ``feature: phrase | phrase``
line per feature; lines starting with ``#`` are comments. Negations are not
handled, so "no parking" still sets ``parking``.
"""

import dataclasses
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from avm_flow import resources
from avm_flow.base.error import ConfigError

FEATURES: Tuple[str, ...] = (
    "south_facing",
    "attic_conversion",
    "parking",
    "development_potential",
    "open_plan",
    "fireplace",
    "central_heating",
    "immersion",
    "hot_press",
    "garage",
    "large_garden",
    "ground_floor_apartment",
    "first_floor_apartment",
    "second_floor_apartment",
    "penthouse_apartment",
    "refurbished",
    "cul_de_sac",
    "garden",
)

INTERACTIONS: Tuple[str, ...] = ("garden_cc", "car_space_cc")

FLAGS: Tuple[str, ...] = FEATURES + INTERACTIONS


@dataclass(frozen=True)
class MinedFeatures:
    south_facing: int = 0
    attic_conversion: int = 0
    parking: int = 0
    development_potential: int = 0
    open_plan: int = 0
    fireplace: int = 0
    central_heating: int = 0
    immersion: int = 0
    hot_press: int = 0
    garage: int = 0
    large_garden: int = 0
    ground_floor_apartment: int = 0
    first_floor_apartment: int = 0
    second_floor_apartment: int = 0
    penthouse_apartment: int = 0
    refurbished: int = 0
    cul_de_sac: int = 0
    garden: int = 0
    garden_cc: int = 0
    car_space_cc: int = 0

    def as_dict(self) -> Dict[str, int]:
        return {name: getattr(self, name) for name in FLAGS}


class PhraseLexicon:
    """Feature name to trigger phrases, stored case-folded."""

    phrases: Dict[str, Tuple[str, ...]]

    def __init__(self, phrases: Mapping[str, Iterable[str]]):
        self.phrases = {}
        for name, triggers in phrases.items():
            if name not in FEATURES:
                raise ConfigError(f"lexicon: unknown feature '{name}'")
            folded = tuple(dict.fromkeys(p.strip().casefold() for p in triggers))
            self.phrases[name] = tuple(p for p in folded if p)

        missing = [name for name in FEATURES if not self.phrases.get(name)]
        if missing:
            raise ConfigError(f"lexicon: no trigger phrase for {', '.join(missing)}")

    @staticmethod
    def parse(text: str, source: str = "lexicon") -> "PhraseLexicon":
        phrases: Dict[str, List[str]] = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            name, sep, rest = line.partition(":")
            if not sep:
                raise ConfigError(f"{source}:{lineno}: expected 'feature: phrases'")
            phrases.setdefault(name.strip(), []).extend(rest.split("|"))
        return PhraseLexicon(phrases)

    @staticmethod
    def load(path: Optional[str] = None) -> "PhraseLexicon":
        path = path or resources.path_of(resources.LEXICON)
        try:
            with open(path, encoding="UTF-8") as src:
                return PhraseLexicon.parse(src.read(), source=path)
        except OSError as ex:
            raise ConfigError(f"{path}: {ex.strerror}") from ex

    def triggered(self, text: str) -> List[str]:
        """Names of the features any phrase of which occurs in ``text``."""
        folded = text.casefold()
        return [
            name
            for name in FEATURES
            if any(phrase in folded for phrase in self.phrases[name])
        ]


_default_lexicon: Optional[PhraseLexicon] = None


def default_lexicon() -> PhraseLexicon:
    global _default_lexicon
    if _default_lexicon is None:
        _default_lexicon = PhraseLexicon.load()
    return _default_lexicon


def mine(description: str, lexicon: Optional[PhraseLexicon] = None) -> MinedFeatures:
    lexicon = lexicon or default_lexicon()
    return MinedFeatures(**{name: 1 for name in lexicon.triggered(description or "")})


def apply_interactions(features: MinedFeatures, within_cc: int) -> MinedFeatures:
    within = 1 if within_cc else 0
    return dataclasses.replace(
        features,
        garden_cc=features.garden & within,
        car_space_cc=features.parking & within,
    )


def tabulate(corpus: Iterable[MinedFeatures]) -> Dict[str, int]:
    counts = {name: 0 for name in FLAGS}
    for features in corpus:
        for name in FLAGS:
            counts[name] += getattr(features, name)
    return counts
