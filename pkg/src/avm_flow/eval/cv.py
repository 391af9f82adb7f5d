# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.eval.cv** runs seeded k-fold cross-validation of a model
specification. Every record is predicted once, by the model fit on the
other folds; records whose categorical level is missing from their training
folds are excluded and counted.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np
import pandas as pd
from sklearn.model_selection import KFold

from avm_flow.base.error import ParameterError
from avm_flow.dataio.clean import records_frame
from avm_flow.eval.metrics import Metrics, metrics
from avm_flow.eval.moran import DEFAULT_NEIGHBOURS, SpatialWeights, morans_i
from avm_flow.fit.design import Records
from avm_flow.fit.penalized import fit_model
from avm_flow.fit.predict import predict_frame
from avm_flow.fit.specs import ModelSpec

DEFAULT_FOLDS = 5

REPORT_COLUMNS = [
    "model",
    "postcodes",
    "n",
    "excluded",
    "r2",
    "rmse",
    "mdape",
    "within5",
    "within10",
    "within20",
    "coverage50",
    "coverage95",
    "morans_i",
]


@dataclass(frozen=True)
class EvalReport:
    model: str
    postcode_mode: str
    metrics: Metrics
    morans_i: float
    excluded: int
    predictions: pd.DataFrame = field(repr=False)

    @property
    def r2(self) -> float:
        return self.metrics.r2

    @property
    def rmse_euro(self) -> float:
        return self.metrics.rmse

    @property
    def mdape(self) -> float:
        return self.metrics.mdape

    @property
    def coverage95(self) -> float:
        return self.metrics.coverage95

    @property
    def coverage50(self) -> float:
        return self.metrics.coverage50

    def row(self) -> Dict[str, object]:
        return {
            "model": self.model,
            "postcodes": self.postcode_mode,
            **self.metrics.as_dict(),
            "excluded": self.excluded,
            "morans_i": self.morans_i,
        }


def fold_assignment(ids, folds: int, seed: int) -> np.ndarray:
    """Fold number per record; records are ordered by id before shuffling."""

    ids = np.asarray(ids)
    order = np.argsort(ids, kind="stable")
    assignment = np.empty(ids.size, dtype=int)
    splitter = KFold(n_splits=folds, shuffle=True, random_state=seed)
    for fold, (_, test) in enumerate(splitter.split(order)):
        assignment[order[test]] = fold
    return assignment


def _score_fold(frame: pd.DataFrame, spec: ModelSpec, test_mask: np.ndarray, fold: int):
    model = fit_model(frame[~test_mask], spec)
    test = frame[test_mask]
    unseen = model.recipe.unseen_mask(test)
    scored = test[~unseen]
    predictions = predict_frame(model, scored)
    predictions.insert(1, "fold", fold)
    predictions["actual"] = scored["price"].to_numpy()
    predictions["log_actual"] = scored["log_price_per_m2"].to_numpy()
    predictions["x_km"] = scored["x_km"].to_numpy()
    predictions["y_km"] = scored["y_km"].to_numpy()
    return predictions, int(unseen.sum())


def kfold_cv(
    records: Records,
    spec: ModelSpec,
    folds: int = DEFAULT_FOLDS,
    seed: int = 0,
    jobs: int = 1,
    neighbours: int = DEFAULT_NEIGHBOURS,
) -> EvalReport:
    frame = records_frame(records)
    if folds < 2:
        raise ParameterError(f"at least 2 folds are needed, got {folds}")
    if len(frame) < 10 * folds:
        raise ParameterError(
            f"{folds}-fold cross-validation needs {10 * folds} records, got {len(frame)}"
        )

    frame = frame.sort_values("id", kind="stable").reset_index(drop=True)
    assignment = fold_assignment(frame["id"].to_numpy(), folds, seed)

    def run(fold: int):
        return _score_fold(frame, spec, assignment == fold, fold)

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        results = list(pool.map(run, range(folds)))

    parts: List[pd.DataFrame] = [part for part, _ in results]
    excluded = sum(count for _, count in results)
    predictions = (
        pd.concat(parts, ignore_index=True).sort_values("id", kind="stable").reset_index(drop=True)
    )
    if predictions.empty:
        raise ParameterError("no record could be scored")

    bundle = metrics(
        predictions["actual"],
        predictions["price"],
        intervals={
            0.5: (predictions["price_lo50"], predictions["price_hi50"]),
            0.95: (predictions["price_lo95"], predictions["price_hi95"]),
        },
    )
    residuals = predictions["log_actual"] - predictions["log_point"]
    weights = SpatialWeights.from_neighbours(
        predictions[["x_km", "y_km"]].to_numpy(), k=neighbours
    )
    return EvalReport(
        model=spec.name,
        postcode_mode=spec.postcode_mode,
        metrics=bundle,
        morans_i=morans_i(residuals.to_numpy(), weights),
        excluded=excluded,
        predictions=predictions,
    )


def report_table(reports: List[EvalReport]) -> pd.DataFrame:
    return pd.DataFrame([report.row() for report in reports], columns=REPORT_COLUMNS)
