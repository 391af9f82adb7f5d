# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.eval.bands** breaks accuracy down by sale-price band, with
the cumulative median error over the bands up to each row.
"""

from typing import List, Tuple

import numpy as np
import numpy.typing as npt
import pandas as pd

from avm_flow.eval.metrics import WITHIN, relative_errors

#: Upper band edges in euro; bands are ``(lower, upper]``.
BAND_EDGES: Tuple[int, ...] = (
    250_000,
    300_000,
    350_000,
    400_000,
    450_000,
    500_000,
    550_000,
    600_000,
    650_000,
    700_000,
    800_000,
    900_000,
    1_000_000,
    1_100_000,
    1_500_000,
    2_000_000,
    3_500_000,
    5_000_000,
)

BAND_COLUMNS = [
    "band",
    "count",
    "mdape",
    "within5",
    "within10",
    "within20",
    "cumulative_mdape",
]


def band_labels() -> List[str]:
    labels = [f"Under €{BAND_EDGES[0]:,}"]
    for lower, upper in zip(BAND_EDGES, BAND_EDGES[1:]):
        labels.append(f"€{lower + 1:,} - €{upper:,}")
    return labels


def band_table(
    actual: npt.ArrayLike, predicted: npt.ArrayLike, relative_to: str = "actual"
) -> pd.DataFrame:
    """
    Rows follow the band order; an ``Over €5,000,000`` row is added only
    when such prices occur. Empty bands have a zero count and NaN metrics.
    """

    actual = np.asarray(actual, dtype=float).ravel()
    errors = relative_errors(actual, predicted, relative_to)
    band = np.searchsorted(np.asarray(BAND_EDGES, dtype=float), actual, side="left")

    labels = band_labels()
    if np.any(band == len(BAND_EDGES)):
        labels.append(f"Over €{BAND_EDGES[-1]:,}")

    rows = []
    for index, label in enumerate(labels):
        inside = errors[band == index]
        so_far = errors[band <= index]
        if inside.size:
            stats = [float(np.median(inside))] + [
                float(np.mean(inside <= limit)) for limit in WITHIN
            ]
        else:
            stats = [float("nan")] * 4
        rows.append(
            [
                label,
                int(inside.size),
                *stats,
                float(np.median(so_far)) if so_far.size else float("nan"),
            ]
        )
    return pd.DataFrame(rows, columns=BAND_COLUMNS)
