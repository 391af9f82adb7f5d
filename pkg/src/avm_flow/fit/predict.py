# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.fit.predict** produces point predictions and Gaussian
prediction intervals on the log price per m² scale, and maps them to euro
prices endpoint-wise. The standard error combines coefficient uncertainty
with the residual variance: ``se² = x₀ᵀ V x₀ + σ̂²``.
"""

from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import stats

from avm_flow.base.error import ParameterError, UnseenLevelError
from avm_flow.dataio.clean import records_frame
from avm_flow.dataio.schema import PropertyRecord
from avm_flow.fit.design import Records
from avm_flow.fit.penalized import FittedModel

LEVELS: Tuple[float, ...] = (0.5, 0.95)

Interval = Tuple[float, float]


@dataclass(frozen=True)
class Prediction:
    id: int
    point: float
    se: float
    size: float
    intervals: Dict[float, Interval]

    @property
    def pi50(self) -> Interval:
        return self.intervals[0.5]

    @property
    def pi95(self) -> Interval:
        return self.intervals[0.95]

    @property
    def price_point(self) -> float:
        return float(np.exp(self.point) * self.size)

    def price_interval(self, level: float) -> Interval:
        lo, hi = self.intervals[level]
        return (float(np.exp(lo) * self.size), float(np.exp(hi) * self.size))

    @property
    def price_pi50(self) -> Interval:
        return self.price_interval(0.5)

    @property
    def price_pi95(self) -> Interval:
        return self.price_interval(0.95)


def _suffix(level: float) -> str:
    return f"{round(level * 100):g}"


def _check_levels(levels: Sequence[float]):
    for level in levels:
        if not 0 < level < 1:
            raise ParameterError(f"interval level must lie in (0, 1), got {level}")


def predict_frame(
    model: FittedModel, records: Records, levels: Sequence[float] = LEVELS
) -> pd.DataFrame:
    """
    Vectorised predictions, one row per record: ``id``, ``size``, ``log_point``,
    ``se``, ``lo<L>``/``hi<L>`` per level (e.g. ``lo95``), ``price`` and
    ``price_lo<L>``/``price_hi<L>``.

    A record with a categorical level unseen in training raises
    :class:`UnseenLevelError` naming the level.
    """

    _check_levels(levels)
    frame = records_frame(records)
    unseen = model.recipe.unseen_mask(frame)
    if unseen.any():
        row = frame.iloc[int(np.argmax(unseen))]
        for encoding in model.recipe.categoricals:
            value = row[model.recipe.source_column(encoding.variable)]
            if value not in encoding.levels:
                raise UnseenLevelError(encoding.variable, value)

    X = model.recipe.transform(frame)
    point = X @ model.beta_hat
    se = np.sqrt(np.einsum("ij,jk,ik->i", X, model.covariance, X) + model.sigma2_hat)
    size = frame["size"].to_numpy(dtype=float)

    columns = {
        "id": frame["id"].to_numpy(),
        "size": size,
        "log_point": point,
        "se": se,
    }
    for level in levels:
        z = stats.norm.ppf(0.5 + level / 2.0)
        columns[f"lo{_suffix(level)}"] = point - z * se
        columns[f"hi{_suffix(level)}"] = point + z * se
    columns["price"] = np.exp(point) * size
    for level in levels:
        for side in ("lo", "hi"):
            name = f"{side}{_suffix(level)}"
            columns[f"price_{name}"] = np.exp(columns[name]) * size
    return pd.DataFrame(columns)


def predict(
    model: FittedModel, record: PropertyRecord, levels: Sequence[float] = LEVELS
) -> Prediction:
    row = predict_frame(model, [record], levels).iloc[0]
    return Prediction(
        id=int(row["id"]),
        point=float(row["log_point"]),
        se=float(row["se"]),
        size=float(row["size"]),
        intervals={
            level: (float(row[f"lo{_suffix(level)}"]), float(row[f"hi{_suffix(level)}"]))
            for level in levels
        },
    )
