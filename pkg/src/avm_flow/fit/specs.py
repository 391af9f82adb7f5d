# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.fit.specs** names the model specifications, from the basic
hedonic regression up to the GAMs with postcode-change dummies, and resolves
a name and a postcode mode into a :class:`ModelSpec`.

Specifications are registered with :data:`model_specs`; the registration
order is the reporting order of the cross-validation tables.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, NamedTuple, Optional, Tuple

from avm_flow.base.error import SpecError
from avm_flow.base.registry import Registry

POSTCODE_MODES: Tuple[str, ...] = ("given", "corrected", "corrected+changes")

#: Listed and corrected postcode of the investigated mislabelling patterns,
#: with the number of occurrences in the reference sample.
POSTCODE_CHANGES: Tuple[Tuple[str, str, int], ...] = (
    ("D5", "D13", 3),
    ("D6", "D6W", 12),
    ("D6W", "D12", 3),
    ("D9", "D3", 3),
    ("D9", "D17", 10),
    ("D11", "D9", 7),
    ("D14", "D16", 19),
    ("D16", "D14", 5),
    ("NCD", "D15", 9),
    ("SCD", "D4", 27),
    ("SCD", "D18", 101),
    ("SCD", "D24", 32),
    ("WCD", "D15", 38),
    ("WCD", "D22", 24),
    ("WCD", "D24", 45),
)

CHANGE_LABELS: Tuple[str, ...] = tuple(f"{g}.{c}" for g, c, _ in POSTCODE_CHANGES)

CATEGORICALS: Tuple[str, ...] = ("property_type", "ber", "postcode")

#: Default basis dimension per smoothed covariate.
DEFAULT_KNOTS: Dict[str, int] = {
    "beds": 5,
    "baths": 5,
    "size": 20,
    "ifsc_km": 20,
    "spatial": 100,
}

#: Config key of a covariate in the ``knots`` section.
KNOT_KEYS: Dict[str, str] = {"ifsc_km": "ifsc"}


@dataclass(frozen=True)
class SmoothSpec:
    covariate: str
    k: int


@dataclass(frozen=True)
class SpatialSpec:
    k: int = 100
    rho: Optional[float] = None
    seed: int = 0


@dataclass(frozen=True)
class ModelSpec:
    name: str
    linear_terms: Tuple[str, ...] = ()
    smooth_terms: Tuple[SmoothSpec, ...] = ()
    spatial: Optional[SpatialSpec] = None
    categorical_terms: Tuple[str, ...] = ()
    postcode_mode: str = "given"
    changes: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.postcode_mode not in POSTCODE_MODES:
            raise SpecError(
                f"unknown postcode mode '{self.postcode_mode}', "
                f"expected one of: {', '.join(POSTCODE_MODES)}"
            )
        for name in self.categorical_terms:
            if name not in CATEGORICALS:
                raise SpecError(f"unknown categorical term '{name}'")

    @property
    def postcode_column(self) -> str:
        return "postcode" if self.postcode_mode == "given" else "postcode_true"

    def covariates(self) -> List[str]:
        return [*self.linear_terms, *(term.covariate for term in self.smooth_terms)]


class TermSet(NamedTuple):
    linear: Tuple[str, ...]
    smooth: Tuple[str, ...] = ()
    spatial: bool = False


COMMON_BINARIES: Tuple[str, ...] = (
    "attic_conversion",
    "south_facing",
    "development_potential",
    "fireplace",
    "hot_press",
    "garage",
    "refurbished",
    "open_plan",
    "ground_floor_apartment",
    "first_floor_apartment",
    "second_floor_apartment",
    "penthouse_apartment",
)

_DISTANCES = ("near_airport", "near_dart", "near_luas")


class SpecTemplate:
    """
    Term sets of one named model, for listed and for corrected postcodes.
    A template without ``given`` terms needs corrected postcodes; one with
    ``changes`` always adds the postcode-change dummies.
    """

    name: str
    title: str
    given: Optional[TermSet] = None
    corrected: TermSet
    categoricals: Tuple[str, ...] = CATEGORICALS
    changes: bool = False

    def terms(self, postcode_mode: str) -> TermSet:
        if postcode_mode == "given":
            if self.given is None:
                raise SpecError(f"{self.name} needs corrected postcodes")
            return self.given
        return self.corrected

    def resolve(
        self,
        postcode_mode: str,
        knots: Optional[Mapping[str, int]] = None,
        rho: Optional[float] = None,
        seed: int = 0,
    ) -> ModelSpec:
        if postcode_mode not in POSTCODE_MODES:
            raise SpecError(
                f"unknown postcode mode '{postcode_mode}', "
                f"expected one of: {', '.join(POSTCODE_MODES)}"
            )
        if self.changes and postcode_mode == "corrected":
            postcode_mode = "corrected+changes"
        terms = self.terms(postcode_mode)
        counts = {**DEFAULT_KNOTS}
        for name, value in (knots or {}).items():
            counts[{v: k for k, v in KNOT_KEYS.items()}.get(name, name)] = int(value)

        return ModelSpec(
            name=self.name,
            linear_terms=terms.linear,
            smooth_terms=tuple(SmoothSpec(name, counts[name]) for name in terms.smooth),
            spatial=(
                SpatialSpec(k=counts["spatial"], rho=rho, seed=seed)
                if terms.spatial
                else None
            ),
            categorical_terms=self.categoricals,
            postcode_mode=postcode_mode,
            changes=CHANGE_LABELS if postcode_mode == "corrected+changes" else (),
        )


model_specs = Registry[SpecTemplate]("SpecTemplate")


@model_specs.add
class BasicLinear(SpecTemplate):
    name = "BasicLinear"
    title = "Basic Linear Model"
    given = corrected = TermSet(("size", "beds", "baths", "ifsc_km"))


@model_specs.add
class Linear(SpecTemplate):
    name = "Linear"
    title = "Linear Model"
    given = corrected = TermSet(
        (
            *COMMON_BINARIES,
            "immersion",
            "parking",
            "near_park",
            "ifsc_km",
            *_DISTANCES,
            "size",
            "garden_cc",
            "car_space_cc",
        )
    )


@model_specs.add
class GAM1(SpecTemplate):
    name = "GAM1"
    title = "GAM 1"
    given = TermSet(
        (*COMMON_BINARIES, "immersion", "near_park", *_DISTANCES, "car_space_cc", "baths"),
        ("ifsc_km", "size", "beds"),
    )
    corrected = TermSet(
        (*COMMON_BINARIES, "near_park", *_DISTANCES, "car_space_cc"),
        ("ifsc_km", "size", "beds", "baths"),
    )


@model_specs.add
class GAM2(SpecTemplate):
    name = "GAM2"
    title = "GAM 2"
    given = TermSet(
        (
            *COMMON_BINARIES,
            "ifsc_km",
            *_DISTANCES,
            "size",
            "garden_cc",
            "car_space_cc",
            "beds",
            "baths",
        ),
        spatial=True,
    )
    corrected = TermSet(
        (
            *COMMON_BINARIES,
            "parking",
            "ifsc_km",
            *_DISTANCES,
            "size",
            "garden_cc",
            "car_space_cc",
            "beds",
            "baths",
        ),
        spatial=True,
    )


_GAM3 = TermSet(
    (*COMMON_BINARIES, "parking", "car_space_cc"),
    ("size", "beds", "baths"),
    spatial=True,
)

_GAM4_CORRECTED = TermSet(
    (*COMMON_BINARIES, "parking", "near_park", *_DISTANCES, "car_space_cc", "beds", "baths"),
    ("ifsc_km", "size"),
    spatial=True,
)


@model_specs.add
class GAM3(SpecTemplate):
    name = "GAM3"
    title = "GAM 3"
    given = corrected = _GAM3


@model_specs.add
class GAM4(SpecTemplate):
    name = "GAM4"
    title = "GAM 4"
    given = TermSet(
        (*COMMON_BINARIES, *_DISTANCES, "car_space_cc"),
        ("ifsc_km", "size", "beds", "baths"),
        spatial=True,
    )
    corrected = _GAM4_CORRECTED


@model_specs.add
class GAM5(SpecTemplate):
    name = "GAM5"
    title = "GAM 5"
    corrected = _GAM3
    changes = True


@model_specs.add
class GAM6(SpecTemplate):
    name = "GAM6"
    title = "GAM 6"
    corrected = _GAM4_CORRECTED
    changes = True


def spec_names() -> List[str]:
    return model_specs.names()


def specs_for_mode(postcode_mode: str) -> List[str]:
    """Names fit under ``postcode_mode``, in reporting order."""
    return [
        template.name
        for template in model_specs.get()
        if postcode_mode != "given" or template.given is not None
    ]


def resolve_spec(
    name: str,
    postcode_mode: str = "given",
    knots: Optional[Mapping[str, int]] = None,
    rho: Optional[float] = None,
    seed: int = 0,
) -> ModelSpec:
    template = model_specs.find(name)
    if template is None:
        raise SpecError(
            f"unknown spec '{name}', expected one of: {', '.join(spec_names())}"
        )
    return template.resolve(postcode_mode, knots=knots, rho=rho, seed=seed)
