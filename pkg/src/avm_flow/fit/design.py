# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.fit.design** turns records and a :class:`ModelSpec` into the
design matrix, the penalty blocks and the response.

Columns are ordered: intercept, linear terms, categorical contrasts,
postcode-change dummies, smooth bases, spatial basis. Every smooth is
centred over the training sample by a sum-to-zero reparameterisation, so a
smooth with ``k`` knots contributes ``k - 1`` columns. A smooth whose covariate
leaves fewer than three distinct knots enters as a linear term instead. The
:class:`DesignRecipe` keeps everything needed to build rows for new data.
"""

import warnings
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy import linalg

from avm_flow.base.error import EmptyLevelWarning, KnotCountWarning, SpecError
from avm_flow.dataio.clean import records_frame
from avm_flow.dataio.schema import BER_LABELS, POSTCODES, PROPERTY_TYPES, PropertyRecord
from avm_flow.fit.specs import ModelSpec
from avm_flow.smooth import (
    CategoricalEncoding,
    choose_quantile_knots,
    choose_spatial_knots,
    cr_design,
    cr_matrices,
    gp_basis,
    gp_term,
    sum_to_zero,
)

Records = Union[Sequence[PropertyRecord], pd.DataFrame]

MIN_SPLINE_KNOTS = 3

LEVELS: Dict[str, Tuple[str, ...]] = {
    "property_type": PROPERTY_TYPES,
    "ber": BER_LABELS,
    "postcode": POSTCODES,
}


class Block(NamedTuple):
    name: str
    kind: str
    start: int
    stop: int
    labels: Tuple[str, ...]

    @property
    def columns(self) -> slice:
        return slice(self.start, self.stop)


class Penalty(NamedTuple):
    block: str
    start: int
    stop: int
    matrix: np.ndarray


def centring_constraint(basis: np.ndarray) -> np.ndarray:
    """
    Null space ``Z`` (``k × (k-1)``) of the column sums of ``basis``, so
    that every column of ``basis @ Z`` sums to zero.
    """

    sums = basis.sum(axis=0).reshape(-1, 1)
    q, _ = linalg.qr(sums)
    return q[:, 1:]


@dataclass(frozen=True)
class SmoothRecipe:
    covariate: str
    knots: np.ndarray = field(repr=False)
    constraint: np.ndarray = field(repr=False)
    F: np.ndarray = field(repr=False, compare=False)
    penalty: np.ndarray = field(repr=False, compare=False)

    @staticmethod
    def build(covariate: str, knots: np.ndarray, x: np.ndarray) -> "SmoothRecipe":
        F, S = cr_matrices(knots)
        constraint = centring_constraint(cr_design(x, knots, F))
        return SmoothRecipe(covariate, knots, constraint, F, S)

    @staticmethod
    def restore(covariate: str, knots: np.ndarray, constraint: np.ndarray):
        F, S = cr_matrices(knots)
        return SmoothRecipe(covariate, knots, constraint, F, S)

    def raw(self, x: np.ndarray) -> np.ndarray:
        return cr_design(x, self.knots, self.F)

    def rows(self, x: np.ndarray) -> np.ndarray:
        return self.raw(x) @ self.constraint

    def constrained_penalty(self) -> np.ndarray:
        S = self.constraint.T @ self.penalty @ self.constraint
        return (S + S.T) / 2.0


@dataclass(frozen=True)
class SpatialRecipe:
    knots: np.ndarray = field(repr=False)
    rho: float
    sigma_x2: float
    constraint: np.ndarray = field(repr=False)
    # training locations, (xmin, ymin, xmax, ymax) km
    extent: Tuple[float, float, float, float]
    penalty: np.ndarray = field(repr=False, compare=False)

    @staticmethod
    def build(
        coords: np.ndarray, k: int, rho: Optional[float], seed: int
    ) -> "SpatialRecipe":
        knots = choose_spatial_knots(coords, k, seed=seed)
        term = gp_term(coords, knots, rho=rho)
        low = coords.min(axis=0)
        high = coords.max(axis=0)
        return SpatialRecipe(
            knots,
            term.rho,
            term.sigma_x2,
            centring_constraint(term.basis),
            (float(low[0]), float(low[1]), float(high[0]), float(high[1])),
            term.penalty,
        )

    @staticmethod
    def restore(
        knots: np.ndarray,
        rho: float,
        sigma_x2: float,
        constraint: np.ndarray,
        extent: Tuple[float, float, float, float],
    ):
        term = gp_term(knots[:1], knots, rho=rho, sigma_x2=sigma_x2)
        return SpatialRecipe(knots, rho, sigma_x2, constraint, extent, term.penalty)

    def raw(self, coords: np.ndarray) -> np.ndarray:
        return gp_basis(coords, self.knots, self.rho, self.sigma_x2)

    def rows(self, coords: np.ndarray) -> np.ndarray:
        return self.raw(coords) @ self.constraint

    def constrained_penalty(self) -> np.ndarray:
        S = self.constraint.T @ self.penalty @ self.constraint
        return (S + S.T) / 2.0


@dataclass(frozen=True)
class DesignRecipe:
    spec: ModelSpec
    linear: Tuple[str, ...]
    categoricals: Tuple[CategoricalEncoding, ...]
    changes: Tuple[str, ...]
    smooths: Tuple[SmoothRecipe, ...]
    spatial: Optional[SpatialRecipe]
    blocks: Tuple[Block, ...] = ()

    @property
    def n_columns(self) -> int:
        return self.blocks[-1].stop if self.blocks else 0

    @property
    def labels(self) -> List[str]:
        return [label for block in self.blocks for label in block.labels]

    def block(self, name: str) -> Block:
        for block in self.blocks:
            if block.name == name:
                return block
        raise KeyError(name)

    def source_column(self, variable: str) -> str:
        return self.spec.postcode_column if variable == "postcode" else variable

    def unseen_mask(self, frame: pd.DataFrame) -> np.ndarray:
        """Rows carrying a categorical level the model was not fit with."""

        mask = np.zeros(len(frame), dtype=bool)
        for encoding in self.categoricals:
            values = frame[self.source_column(encoding.variable)].tolist()
            mask |= ~encoding.known(values)
        return mask

    def transform(self, records: Records) -> np.ndarray:
        frame = records_frame(records)
        parts: List[np.ndarray] = [np.ones((len(frame), 1))]
        if self.linear:
            parts.append(_numeric(frame, self.linear))
        for encoding in self.categoricals:
            values = frame[self.source_column(encoding.variable)].tolist()
            parts.append(encoding.encode(values))
        if self.changes:
            observed = frame["postcode_change"].to_numpy()
            parts.append(
                np.column_stack([(observed == label) for label in self.changes]).astype(
                    float
                )
            )
        for smooth in self.smooths:
            parts.append(smooth.rows(_numeric(frame, [smooth.covariate]).ravel()))
        if self.spatial is not None:
            parts.append(self.spatial.rows(_coords(frame)))
        return np.hstack(parts)

    def penalties(self) -> List[Penalty]:
        result: List[Penalty] = []
        for smooth in self.smooths:
            block = self.block(f"s({smooth.covariate})")
            result.append(
                Penalty(block.name, block.start, block.stop, smooth.constrained_penalty())
            )
        if self.spatial is not None:
            block = self.block("gp(location)")
            result.append(
                Penalty(
                    block.name, block.start, block.stop, self.spatial.constrained_penalty()
                )
            )
        return result

    def with_blocks(self) -> "DesignRecipe":
        blocks: List[Block] = []

        def add(name: str, kind: str, labels: Sequence[str]):
            start = blocks[-1].stop if blocks else 0
            blocks.append(Block(name, kind, start, start + len(labels), tuple(labels)))

        add("intercept", "intercept", ["(Intercept)"])
        if self.linear:
            add("linear", "linear", self.linear)
        for encoding in self.categoricals:
            add(
                encoding.variable,
                "categorical",
                [f"{encoding.variable}[{level}]" for level in encoding.levels[:-1]],
            )
        if self.changes:
            add("changes", "changes", self.changes)
        for smooth in self.smooths:
            width = smooth.constraint.shape[1]
            add(
                f"s({smooth.covariate})",
                "smooth",
                [f"s({smooth.covariate}).{i + 1}" for i in range(width)],
            )
        if self.spatial is not None:
            width = self.spatial.constraint.shape[1]
            add("gp(location)", "spatial", [f"gp(location).{i + 1}" for i in range(width)])

        return DesignRecipe(
            self.spec,
            self.linear,
            self.categoricals,
            self.changes,
            self.smooths,
            self.spatial,
            tuple(blocks),
        )


class Design(NamedTuple):
    X: np.ndarray
    penalties: List[Penalty]
    y: np.ndarray
    recipe: DesignRecipe


def _numeric(frame: pd.DataFrame, names: Sequence[str]) -> np.ndarray:
    missing = [name for name in names if name not in frame.columns]
    if missing:
        raise SpecError(f"unknown term '{missing[0]}'")
    return frame[list(names)].to_numpy(dtype=float)


def _coords(frame: pd.DataFrame) -> np.ndarray:
    return frame[["x_km", "y_km"]].to_numpy(dtype=float)


def _encoding(variable: str, values: Sequence[str]) -> Optional[CategoricalEncoding]:
    seen = set(values)
    levels = [level for level in LEVELS[variable] if level in seen]
    levels.extend(sorted(seen - set(LEVELS[variable])))
    empty = [level for level in LEVELS[variable] if level not in seen]
    if empty:
        warnings.warn(
            f"{variable}: no records for {', '.join(empty)}; level dropped",
            EmptyLevelWarning,
            stacklevel=3,
        )
    if len(levels) < 2:
        warnings.warn(
            f"{variable}: a single level remains; term dropped",
            EmptyLevelWarning,
            stacklevel=3,
        )
        return None
    return sum_to_zero(levels, variable)


def _changes(spec: ModelSpec, frame: pd.DataFrame) -> Tuple[str, ...]:
    if not spec.changes:
        return ()
    seen = set(frame["postcode_change"])
    missing = [label for label in spec.changes if label not in seen]
    if missing:
        warnings.warn(
            f"postcode changes without records: {', '.join(missing)}; dummies dropped",
            EmptyLevelWarning,
            stacklevel=3,
        )
    return tuple(label for label in spec.changes if label in seen)


def build_recipe(records: Records, spec: ModelSpec) -> DesignRecipe:
    frame = records_frame(records)
    _numeric(frame, spec.covariates())

    categoricals: List[CategoricalEncoding] = []
    for variable in spec.categorical_terms:
        column = spec.postcode_column if variable == "postcode" else variable
        encoding = _encoding(variable, frame[column].tolist())
        if encoding is not None:
            categoricals.append(encoding)

    linear = list(spec.linear_terms)
    smooths = []
    for term in spec.smooth_terms:
        x = _numeric(frame, [term.covariate]).ravel()
        knots = choose_quantile_knots(x, term.k)
        if knots.size < MIN_SPLINE_KNOTS:
            warnings.warn(
                f"s({term.covariate}): {knots.size} distinct knots, "
                "entered as a linear term instead",
                KnotCountWarning,
                stacklevel=2,
            )
            linear.append(term.covariate)
            continue
        smooths.append(SmoothRecipe.build(term.covariate, knots, x))

    spatial = None
    if spec.spatial is not None:
        spatial = SpatialRecipe.build(
            _coords(frame), spec.spatial.k, spec.spatial.rho, spec.spatial.seed
        )

    recipe = DesignRecipe(
        spec,
        tuple(linear),
        tuple(categoricals),
        _changes(spec, frame),
        tuple(smooths),
        spatial,
    )
    return recipe.with_blocks()


def build_design(records: Records, spec: ModelSpec) -> Design:
    """
    :returns: ``(X, penalties, y, recipe)``; each penalty is aligned to the
        column range of its smooth.
    """

    frame = records_frame(records)
    recipe = build_recipe(frame, spec)
    X = recipe.transform(frame)
    y = frame["log_price_per_m2"].to_numpy(dtype=float)
    return Design(X, recipe.penalties(), y, recipe)
