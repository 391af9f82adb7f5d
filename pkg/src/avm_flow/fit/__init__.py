# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.fit** assembles design matrices for the registered model
specifications, fits them by penalized least squares with GCV-selected
smoothing, predicts with intervals and reports relative scalings.
"""

from .design import Block, Design, DesignRecipe, Penalty, build_design, build_recipe
from .penalized import (
    FittedModel,
    PenalizedFit,
    fit_model,
    fit_penalized,
    penalized_gradient,
    penalized_objective,
)
from .persist import load_model, model_from_dict, model_to_dict, save_model
from .predict import Prediction, predict, predict_frame
from .scalings import coefficient_scalings, premium, smooth_effects
from .specs import (
    POSTCODE_CHANGES,
    POSTCODE_MODES,
    ModelSpec,
    SmoothSpec,
    SpatialSpec,
    model_specs,
    resolve_spec,
    spec_names,
    specs_for_mode,
)

__all__ = [
    "Block",
    "Design",
    "DesignRecipe",
    "FittedModel",
    "ModelSpec",
    "POSTCODE_CHANGES",
    "POSTCODE_MODES",
    "PenalizedFit",
    "Penalty",
    "Prediction",
    "SmoothSpec",
    "SpatialSpec",
    "build_design",
    "build_recipe",
    "coefficient_scalings",
    "fit_model",
    "fit_penalized",
    "load_model",
    "model_from_dict",
    "model_specs",
    "model_to_dict",
    "penalized_gradient",
    "penalized_objective",
    "predict",
    "predict_frame",
    "premium",
    "resolve_spec",
    "save_model",
    "smooth_effects",
    "spec_names",
    "specs_for_mode",
]
