# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.synth.generate** draws synthetic Dublin sales from a known
hedonic truth and keeps everything it drew in a :class:`GroundTruth`.

The log price per square metre of a sale is the sum of an intercept, the
property type and BER effects, the mentioned-feature effects, one-dimensional
effects of beds, baths and floor area, a spatial surface, the premium of a
mislabelled postcode and Gaussian noise. Generation uses one seeded
generator and draws in a fixed order, so a configuration always reproduces
the same listings.
"""

import datetime
import json
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.spatial.distance import cdist

from avm_flow.base.error import ModelFormatError
from avm_flow.dataio.clean import change_label
from avm_flow.dataio.ingest import write_listings
from avm_flow.dataio.schema import BER_LABELS, MIN_SIZE_M2, POSTCODES, RawListing
from avm_flow.fit.specs import POSTCODE_CHANGES
from avm_flow.geo.landmarks import default_landmarks, distance_features_many
from avm_flow.geo.project import project_many, unproject
from avm_flow.smooth.kernel import kernel
from avm_flow.synth.config import APARTMENT_FEATURES, GeneratorConfig
from avm_flow.synth.regions import NEIGHBOURHOODS, RegionMap, mix_probabilities
from avm_flow.textmine import FEATURES, FLAGS

TRUTH_FORMAT = "avm-flow/truth@1"

#: Sample size the mislabelling counts were observed on.
REFERENCE_RECORDS = 5208

FIRST_SALE = datetime.date(2018, 1, 1)
SALE_DAYS = 334

PHRASES: Dict[str, str] = {
    "south_facing": "South facing aspect",
    "attic_conversion": "Attic conversion",
    "parking": "Off-street parking",
    "development_potential": "Development potential",
    "open_plan": "Open plan kitchen and living area",
    "fireplace": "Feature fireplace",
    "central_heating": "Gas fired central heating",
    "immersion": "Electric immersion",
    "hot_press": "Hot press",
    "garage": "Detached garage",
    "large_garden": "Large garden to the rear",
    "ground_floor_apartment": "Ground floor apartment",
    "first_floor_apartment": "First floor apartment",
    "second_floor_apartment": "Second floor apartment",
    "penthouse_apartment": "Penthouse apartment",
    "refurbished": "Recently refurbished",
    "cul_de_sac": "Quiet cul-de-sac location",
    "garden": "Private garden",
}

# Sentences that trigger no lexicon phrase.
FILLERS: Tuple[str, ...] = (
    "Bright and well proportioned accommodation",
    "Close to local shops and schools",
    "Viewing is highly recommended",
    "Presented in excellent condition throughout",
    "Excellent public transport links nearby",
    "Generous reception rooms",
    "Within walking distance of local amenities",
    "Double glazed windows throughout",
)

SHAPES: Dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "beds": lambda x: np.tanh((x - 1.0) / 1.5),
    "baths": lambda x: -((x - 2.0) ** 2),
    "size": lambda x: np.exp(-(x - MIN_SIZE_M2) / 50.0),
}

COMPONENTS: Tuple[str, ...] = (
    "intercept",
    "property_type",
    "ber",
    "features",
    "beds",
    "baths",
    "size",
    "surface",
    "change",
)


@dataclass(frozen=True)
class TrueSurface:
    """Linear and radial trend plus a kernel convolution of point sources."""

    sources: np.ndarray
    amplitudes: np.ndarray
    rho: float
    east: float
    north: float
    radial: float

    def __call__(self, xy) -> np.ndarray:
        xy = np.atleast_2d(np.asarray(xy, dtype=float))
        trend = (
            self.east * xy[:, 0]
            + self.north * xy[:, 1]
            + self.radial * np.hypot(xy[:, 0], xy[:, 1])
        )
        weights = kernel(cdist(xy, self.sources), self.rho)
        return trend + weights @ self.amplitudes

    @staticmethod
    def build(config: GeneratorConfig, regions: RegionMap, rng: np.random.Generator):
        spec = config.surface
        pad = spec["rho"]
        xs = np.arange(regions.low[0] - pad, regions.high[0] + pad + 1e-9, spec["spacing"])
        ys = np.arange(regions.low[1] - pad, regions.high[1] + pad + 1e-9, spec["spacing"])
        gx, gy = np.meshgrid(xs, ys)
        sources = np.column_stack([gx.ravel(), gy.ravel()])
        amplitudes = rng.normal(0.0, spec["source_sd"], size=sources.shape[0])
        return TrueSurface(
            sources=sources,
            amplitudes=amplitudes,
            rho=spec["rho"],
            east=spec["east"],
            north=spec["north"],
            radial=spec["radial"],
        )

    def to_dict(self) -> dict:
        return {
            "sources": self.sources.tolist(),
            "amplitudes": self.amplitudes.tolist(),
            "rho": self.rho,
            "east": self.east,
            "north": self.north,
            "radial": self.radial,
        }

    @staticmethod
    def from_dict(data: dict) -> "TrueSurface":
        return TrueSurface(
            sources=np.asarray(data["sources"], dtype=float).reshape(-1, 2),
            amplitudes=np.asarray(data["amplitudes"], dtype=float),
            rho=float(data["rho"]),
            east=float(data["east"]),
            north=float(data["north"]),
            radial=float(data["radial"]),
        )


class GroundTruth:
    """
    Everything a generation drew. ``records`` has one row per listing id
    with the true postcode, the planted flags, the covariates, the planar
    location, the postcode-change label, the noise and whether the listing
    was planted below the minimum floor area.
    """

    config: GeneratorConfig
    field: TrueSurface
    records: pd.DataFrame

    def __init__(self, config: GeneratorConfig, field: TrueSurface, records: pd.DataFrame):
        self.config = config
        self.field = field
        self.records = records.set_index("id", drop=False)

    def surface(self, xy) -> np.ndarray:
        return self.field(xy)

    def smooth(self, name: str, x) -> np.ndarray:
        """True one-dimensional effect of ``beds``, ``baths`` or ``size``."""
        return self.config.smooths[name] * SHAPES[name](np.asarray(x, dtype=float))

    def coefficient(self, variable: str, level: str) -> float:
        if variable == "property_type":
            return self.config.type_effects()[level]
        if variable == "ber":
            return self.config.ber_effects()[level]
        if variable == "changes":
            return self.config.change_effect(level)
        return self.config.feature_effects()[variable]

    def components(self, ids: Optional[Sequence[int]] = None) -> pd.DataFrame:
        frame = self.records if ids is None else self.records.loc[list(ids)]
        types = self.config.type_effects()
        bers = self.config.ber_effects()
        effects = self.config.feature_effects()
        weights = np.array([effects[name] for name in FLAGS])
        return pd.DataFrame(
            {
                "intercept": np.full(len(frame), self.config.intercept),
                "property_type": frame["property_type"].map(types).to_numpy(float),
                "ber": frame["ber"].map(bers).to_numpy(float),
                "features": frame[list(FLAGS)].to_numpy(float) @ weights,
                "beds": self.smooth("beds", frame["beds"].to_numpy(float)),
                "baths": self.smooth("baths", frame["baths"].to_numpy(float)),
                "size": self.smooth("size", frame["size"].to_numpy(float)),
                "surface": self.surface(frame[["x_km", "y_km"]].to_numpy(float)),
                "change": np.array(
                    [self.config.change_effect(label) if label else 0.0 for label in frame["change"]]
                ),
            },
            index=frame.index,
        )

    def noiseless_log_ppm2(self, ids: Optional[Sequence[int]] = None) -> np.ndarray:
        parts = self.components(ids)
        total = np.zeros(len(parts))
        for name in COMPONENTS:
            total = total + parts[name].to_numpy()
        return total

    def planted_counts(self, ids: Optional[Sequence[int]] = None) -> Dict[str, int]:
        frame = self.records if ids is None else self.records.loc[list(ids)]
        return {name: int(frame[name].sum()) for name in FLAGS}

    def undersized_ids(self) -> List[int]:
        return [int(i) for i in self.records.index[self.records["undersized"]]]

    def to_dict(self) -> dict:
        records = self.records.reset_index(drop=True)
        return {
            "format": TRUTH_FORMAT,
            "config": self.config.as_dict(),
            "surface": self.field.to_dict(),
            "records": {
                name: records[name].tolist() for name in records.columns
            },
        }

    @staticmethod
    def from_dict(data: dict) -> "GroundTruth":
        if data.get("format") != TRUTH_FORMAT:
            raise ModelFormatError(f"expected format '{TRUTH_FORMAT}'")
        try:
            return GroundTruth(
                GeneratorConfig.from_dict(data["config"]),
                TrueSurface.from_dict(data["surface"]),
                pd.DataFrame(data["records"]),
            )
        except (KeyError, TypeError, ValueError) as ex:
            raise ModelFormatError(f"ground truth: {ex}") from ex

    def save(self, path: str):
        with open(path, "w", encoding="UTF-8") as out:
            json.dump(self.to_dict(), out, indent=1, sort_keys=True)
            out.write("\n")

    @staticmethod
    def load(path: str) -> "GroundTruth":
        try:
            with open(path, encoding="UTF-8") as src:
                data = json.load(src)
        except (OSError, ValueError) as ex:
            raise ModelFormatError(str(ex), path) from ex
        return GroundTruth.from_dict(data)


def _plant(config: GeneratorConfig, is_apartment: np.ndarray, rng: np.random.Generator):
    total = is_apartment.shape[0]
    planted: Dict[str, np.ndarray] = {}
    for name in FEATURES:
        if name in APARTMENT_FEATURES:
            continue
        share = config.phrase_frequencies.get(name, 0.0)
        planted[name] = rng.random(total) < share

    # An apartment is on at most one of the listed floors.
    draw = rng.random(total)
    lower = 0.0
    for name in APARTMENT_FEATURES:
        upper = lower + config.apartment_phrase_frequencies.get(name, 0.0)
        planted[name] = is_apartment & (draw >= lower) & (draw < upper)
        lower = upper

    # The large-garden phrase mentions a garden.
    planted["garden"] = planted["garden"] | planted["large_garden"]
    return planted


def _describe(planted: Dict[str, np.ndarray], index: int, rng: np.random.Generator) -> str:
    sentences = [PHRASES[name] for name in FEATURES if planted[name][index]]
    if planted["large_garden"][index] and "Private garden" in sentences:
        sentences.remove("Private garden")
    picks = rng.choice(len(FILLERS), size=2, replace=False)
    sentences.extend(FILLERS[i] for i in picks)
    order = rng.permutation(len(sentences))
    return ". ".join(sentences[i] for i in order) + "."


def _mislabel(
    config: GeneratorConfig,
    true_codes: np.ndarray,
    undersized: np.ndarray,
    rng: np.random.Generator,
) -> Tuple[np.ndarray, np.ndarray]:
    given = true_codes.copy()
    labels = np.full(true_codes.shape[0], "", dtype=object)
    if not config.mislabels:
        return given, labels

    for listed, corrected, count in POSTCODE_CHANGES:
        wanted = int(round(count * config.n_records / REFERENCE_RECORDS))
        candidates = np.flatnonzero(
            (true_codes == corrected) & (given == corrected) & ~undersized
        )
        chosen = rng.choice(candidates, size=min(wanted, candidates.size), replace=False)
        given[chosen] = listed
        labels[chosen] = change_label(listed, corrected)
    return given, labels


def generate(config: GeneratorConfig) -> Tuple[List[RawListing], GroundTruth]:
    rng = np.random.default_rng(config.seed)
    regions = RegionMap()
    field = TrueSurface.build(config, regions, rng)

    total = config.n_records + config.n_undersized
    pairs, probabilities = mix_probabilities()
    picks = rng.choice(len(pairs), size=total, p=probabilities)
    true_codes = np.array([pairs[i][0] for i in picks], dtype=object)
    types = np.array([pairs[i][1] for i in picks], dtype=object)

    planar = np.empty((total, 2))
    for code in POSTCODES:
        where = np.flatnonzero(true_codes == code)
        if where.size:
            planar[where] = regions.sample(rng, code, where.size)
    latlon = unproject(planar)
    lat, lon = latlon[:, 0], latlon[:, 1]
    xy = project_many(lat, lon)

    median = np.array([config.sizes[t] for t in types])
    size = np.round(median * np.exp(rng.normal(0.0, config.size_spread, total)), 1)
    size = np.maximum(size, MIN_SIZE_M2)
    undersized = np.zeros(total, dtype=bool)
    if config.n_undersized:
        small = rng.choice(total, size=config.n_undersized, replace=False)
        undersized[small] = True
        size[small] = np.round(rng.uniform(20.0, MIN_SIZE_M2 - 0.1, small.size), 1)

    is_apartment = types == "Apartment"
    beds = np.rint(size / 30.0 + rng.normal(0.0, 0.6, total))
    beds = np.where(is_apartment, np.clip(beds, 1, 3), np.clip(beds, 1, 6)).astype(int)
    baths = np.clip(np.rint(0.6 * beds + rng.normal(0.0, 0.5, total)), 1, 4).astype(int)

    mix = np.array([config.ber_mix[name] for name in BER_LABELS])
    ber = np.array(BER_LABELS, dtype=object)[
        rng.choice(len(BER_LABELS), size=total, p=mix / mix.sum())
    ]

    planted = _plant(config, is_apartment, rng)
    descriptions = [_describe(planted, i, rng) for i in range(total)]
    within = distance_features_many(lat, lon, default_landmarks())[
        "within_city_centre"
    ].to_numpy(int)
    planted["garden_cc"] = planted["garden"] & (within == 1)
    planted["car_space_cc"] = planted["parking"] & (within == 1)

    given, labels = _mislabel(config, true_codes, undersized, rng)
    days = rng.integers(0, SALE_DAYS, size=total)
    noise = rng.normal(0.0, config.noise_sd, size=total)

    ids = np.arange(total)
    records = pd.DataFrame(
        {
            "id": ids,
            "property_type": types,
            "ber": ber,
            "postcode_true": true_codes,
            "postcode_given": given,
            "change": labels,
            "beds": beds,
            "baths": baths,
            "size": size,
            "x_km": xy[:, 0],
            "y_km": xy[:, 1],
            **{name: planted[name].astype(int) for name in FLAGS},
            "noise": noise,
            "undersized": undersized,
        }
    )
    truth = GroundTruth(config, field, records)
    log_ppm2 = truth.noiseless_log_ppm2() + noise
    price = np.exp(log_ppm2) * size

    listings = [
        RawListing(
            id=int(ids[i]),
            price=float(price[i]),
            sale_date=FIRST_SALE + datetime.timedelta(days=int(days[i])),
            latitude=float(lat[i]),
            longitude=float(lon[i]),
            neighbourhood=NEIGHBOURHOODS[given[i]],
            baths=int(baths[i]),
            beds=int(beds[i]),
            ber=str(ber[i]),
            description=descriptions[i],
            size=float(size[i]),
            property_type=str(types[i]),
            postcode_given=str(given[i]),
            postcode_corrected=str(true_codes[i]),
        )
        for i in range(total)
    ]
    return listings, truth


def write_synthetic(
    listings: Sequence[RawListing], truth: GroundTruth, csv_path: str, truth_path: str
):
    write_listings(listings, csv_path)
    truth.save(truth_path)
