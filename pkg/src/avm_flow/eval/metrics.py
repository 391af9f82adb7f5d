# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.eval.metrics** computes the accuracy suite on euro prices:
R², RMSE, the median absolute percentage error, the share of predictions
within 5, 10 and 20 percent, and prediction-interval coverage.

Relative errors are ``|a - p| / a`` by default; ``relative_to="predicted"``
divides by the prediction instead. Shares and errors are fractions, not
percentages. "Within X" counts errors less than or equal to X.
"""

import dataclasses
from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Tuple

import numpy as np
import numpy.typing as npt

from avm_flow.base.error import ParameterError

WITHIN: Tuple[float, ...] = (0.05, 0.10, 0.20)
RELATIVE_TO = ("actual", "predicted")


@dataclass(frozen=True)
class Metrics:
    n: int
    r2: float
    rmse: float
    mdape: float
    within5: float
    within10: float
    within20: float
    coverage50: float = float("nan")
    coverage95: float = float("nan")

    def as_dict(self) -> Dict[str, float]:
        return dataclasses.asdict(self)


def relative_errors(
    actual: npt.ArrayLike, predicted: npt.ArrayLike, relative_to: str = "actual"
) -> np.ndarray:
    actual = np.asarray(actual, dtype=float)
    predicted = np.asarray(predicted, dtype=float)
    if actual.shape != predicted.shape:
        raise ParameterError("actual and predicted differ in length")
    if relative_to not in RELATIVE_TO:
        raise ParameterError(f"unknown error denominator '{relative_to}'")
    base = actual if relative_to == "actual" else predicted
    if np.any(base == 0):
        raise ParameterError(f"zero {relative_to} price")
    return np.abs(actual - predicted) / np.abs(base)


def coverage(actual: npt.ArrayLike, lower: npt.ArrayLike, upper: npt.ArrayLike) -> float:
    actual = np.asarray(actual, dtype=float)
    inside = (np.asarray(lower) <= actual) & (actual <= np.asarray(upper))
    return float(inside.mean()) if actual.size else float("nan")


def metrics(
    actual: npt.ArrayLike,
    predicted: npt.ArrayLike,
    intervals: Optional[Mapping[float, Tuple[npt.ArrayLike, npt.ArrayLike]]] = None,
    relative_to: str = "actual",
) -> Metrics:
    """
    :param intervals: Lower and upper euro bounds keyed by level; 0.5 and
        0.95 fill the coverage fields.
    """

    actual = np.asarray(actual, dtype=float).ravel()
    predicted = np.asarray(predicted, dtype=float).ravel()
    if actual.size < 1:
        raise ParameterError("metrics need at least one record")
    errors = relative_errors(actual, predicted, relative_to)

    residual = actual - predicted
    rss = float(residual @ residual)
    centred = actual - actual.mean()
    tss = float(centred @ centred)

    cover = {}
    for level, (lower, upper) in (intervals or {}).items():
        cover[level] = coverage(actual, lower, upper)

    return Metrics(
        n=int(actual.size),
        r2=1.0 - rss / tss if tss > 0 else float("nan"),
        rmse=float(np.sqrt(rss / actual.size)),
        mdape=float(np.median(errors)),
        within5=float(np.mean(errors <= WITHIN[0])),
        within10=float(np.mean(errors <= WITHIN[1])),
        within20=float(np.mean(errors <= WITHIN[2])),
        coverage50=cover.get(0.5, float("nan")),
        coverage95=cover.get(0.95, float("nan")),
    )
