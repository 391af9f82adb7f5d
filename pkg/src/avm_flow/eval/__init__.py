# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.eval** provides the cross-validation harness and the accuracy
suite: price metrics, Moran's I of residuals, price-band tables and the
spatial knot sweep.
"""

from .bands import BAND_EDGES, band_labels, band_table
from .cv import EvalReport, fold_assignment, kfold_cv, report_table
from .metrics import Metrics, coverage, metrics, relative_errors
from .moran import MoranTest, SpatialWeights, morans_i, morans_i_test
from .sweep import SweepResult, knot_sweep

__all__ = [
    "BAND_EDGES",
    "EvalReport",
    "Metrics",
    "MoranTest",
    "SpatialWeights",
    "SweepResult",
    "band_labels",
    "band_table",
    "coverage",
    "fold_assignment",
    "kfold_cv",
    "knot_sweep",
    "metrics",
    "morans_i",
    "morans_i_test",
    "relative_errors",
    "report_table",
]
