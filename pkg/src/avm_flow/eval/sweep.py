# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.eval.sweep** refits a spatial specification for a range of
spatial knot counts and locates the elbow: the smallest count whose
cross-validated R² is within 0.005 of the R² at the largest count.
"""

import dataclasses
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from avm_flow.base.error import ParameterError, SweepSkipWarning
from avm_flow.dataio.clean import records_frame
from avm_flow.eval.cv import DEFAULT_FOLDS, kfold_cv
from avm_flow.fit.design import Records
from avm_flow.fit.specs import ModelSpec

ELBOW_TOLERANCE = 0.005

SWEEP_COLUMNS = ["k", "r2", "rmse", "mdape", "coverage95", "elbow"]


@dataclass(frozen=True)
class SweepResult:
    table: pd.DataFrame = field(repr=False)
    elbow: Optional[int]


def knot_sweep(
    records: Records,
    spec: ModelSpec,
    k_values: Sequence[int],
    folds: int = DEFAULT_FOLDS,
    seed: int = 0,
    jobs: int = 1,
) -> SweepResult:
    if spec.spatial is None:
        raise ParameterError(f"{spec.name} has no spatial term to sweep")
    k_values = [int(k) for k in k_values]
    if not k_values:
        raise ParameterError("no knot counts to sweep")
    if any(b <= a for a, b in zip(k_values, k_values[1:])):
        raise ParameterError("knot counts must be sorted ascending")

    frame = records_frame(records)
    locations = len(np.unique(frame[["x_km", "y_km"]].to_numpy(), axis=0))

    rows = []
    for k in k_values:
        if k > locations:
            warnings.warn(
                f"k={k} exceeds the {locations} distinct locations; skipped",
                SweepSkipWarning,
                stacklevel=2,
            )
            continue
        trial = dataclasses.replace(spec, spatial=dataclasses.replace(spec.spatial, k=k))
        report = kfold_cv(frame, trial, folds=folds, seed=seed, jobs=jobs)
        rows.append(
            {
                "k": k,
                "r2": report.r2,
                "rmse": report.rmse_euro,
                "mdape": report.mdape,
                "coverage95": report.coverage95,
            }
        )

    table = pd.DataFrame(rows, columns=SWEEP_COLUMNS[:-1])
    elbow = None
    if rows:
        target = table["r2"].iloc[-1] - ELBOW_TOLERANCE
        elbow = int(table.loc[table["r2"] >= target, "k"].iloc[0])
    table["elbow"] = table["k"] == elbow
    return SweepResult(table, elbow)
