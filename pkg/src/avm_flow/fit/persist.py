# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.fit.persist** stores a :class:`FittedModel` as a versioned
JSON document holding the spec, knots, constraints, coefficients,
covariance, smoothing parameters and residual variance. Floats are written
in shortest round-trip form, so a loaded model re-predicts bit-exactly.
"""

import dataclasses
import json
from typing import Any, Dict

import numpy as np

from avm_flow.base.error import AvmError, ModelFormatError
from avm_flow.fit.design import DesignRecipe, SmoothRecipe, SpatialRecipe
from avm_flow.fit.penalized import FittedModel
from avm_flow.fit.specs import ModelSpec, SmoothSpec, SpatialSpec
from avm_flow.smooth import sum_to_zero

FORMAT_VERSION = "avm-flow/model@1"


def _matrix(value: np.ndarray) -> list:
    return np.asarray(value, dtype=float).tolist()


def _spec_dict(spec: ModelSpec) -> Dict[str, Any]:
    return dataclasses.asdict(spec)


def _spec_from(data: Dict[str, Any]) -> ModelSpec:
    spatial = data.get("spatial")
    return ModelSpec(
        name=data["name"],
        linear_terms=tuple(data["linear_terms"]),
        smooth_terms=tuple(SmoothSpec(**term) for term in data["smooth_terms"]),
        spatial=SpatialSpec(**spatial) if spatial else None,
        categorical_terms=tuple(data["categorical_terms"]),
        postcode_mode=data["postcode_mode"],
        changes=tuple(data["changes"]),
    )


def model_to_dict(model: FittedModel) -> Dict[str, Any]:
    recipe = model.recipe
    spatial = recipe.spatial
    return {
        "version": FORMAT_VERSION,
        "spec": _spec_dict(model.spec),
        "design": {
            "linear": list(recipe.linear),
            "categoricals": [
                {"variable": enc.variable, "levels": list(enc.levels)}
                for enc in recipe.categoricals
            ],
            "changes": list(recipe.changes),
            "smooths": [
                {
                    "covariate": smooth.covariate,
                    "knots": _matrix(smooth.knots),
                    "constraint": _matrix(smooth.constraint),
                }
                for smooth in recipe.smooths
            ],
            "spatial": (
                {
                    "knots": _matrix(spatial.knots),
                    "rho": spatial.rho,
                    "sigma_x2": spatial.sigma_x2,
                    "constraint": _matrix(spatial.constraint),
                    "extent": list(spatial.extent),
                }
                if spatial is not None
                else None
            ),
            "columns": recipe.labels,
        },
        "beta": _matrix(model.beta_hat),
        "covariance": _matrix(model.covariance),
        "sigma2": model.sigma2_hat,
        "lambdas": model.lambdas,
        "edf": model.edf,
        "gcv": model.gcv,
        "converged": model.converged,
        "n": model.n,
    }


def model_from_dict(data: Dict[str, Any]) -> FittedModel:
    if not isinstance(data, dict) or data.get("version") != FORMAT_VERSION:
        raise ModelFormatError(f"expected a {FORMAT_VERSION} document")
    try:
        design = data["design"]
        spatial = design["spatial"]
        recipe = DesignRecipe(
            spec=_spec_from(data["spec"]),
            linear=tuple(design["linear"]),
            categoricals=tuple(
                sum_to_zero(item["levels"], item["variable"])
                for item in design["categoricals"]
            ),
            changes=tuple(design["changes"]),
            smooths=tuple(
                SmoothRecipe.restore(
                    item["covariate"],
                    np.array(item["knots"], dtype=float),
                    np.array(item["constraint"], dtype=float),
                )
                for item in design["smooths"]
            ),
            spatial=(
                SpatialRecipe.restore(
                    np.array(spatial["knots"], dtype=float),
                    float(spatial["rho"]),
                    float(spatial["sigma_x2"]),
                    np.array(spatial["constraint"], dtype=float),
                    tuple(float(v) for v in spatial["extent"]),
                )
                if spatial
                else None
            ),
        ).with_blocks()

        beta = np.array(data["beta"], dtype=float)
        covariance = np.array(data["covariance"], dtype=float)
        if recipe.labels != list(design["columns"]):
            raise ModelFormatError("design columns do not match the stored terms")
        if beta.shape != (recipe.n_columns,) or covariance.shape != (beta.size, beta.size):
            raise ModelFormatError("coefficient dimensions do not match the design")

        return FittedModel(
            spec=recipe.spec,
            recipe=recipe,
            beta_hat=beta,
            covariance=covariance,
            sigma2_hat=float(data["sigma2"]),
            lambdas={str(k): float(v) for k, v in data["lambdas"].items()},
            edf={str(k): float(v) for k, v in data["edf"].items()},
            gcv=float(data["gcv"]),
            converged=bool(data["converged"]),
            n=int(data["n"]),
        )
    except ModelFormatError:
        raise
    except (KeyError, TypeError, ValueError, AvmError) as ex:
        raise ModelFormatError(f"malformed model document: {ex}") from ex


def save_model(model: FittedModel, path: str):
    with open(path, "w", encoding="UTF-8", newline="\n") as out:
        json.dump(model_to_dict(model), out, indent=1, sort_keys=True)
        out.write("\n")


def load_model(path: str) -> FittedModel:
    try:
        with open(path, encoding="UTF-8") as src:
            data = json.load(src)
    except FileNotFoundError as ex:
        raise ModelFormatError("file not found", path) from ex
    except (OSError, ValueError) as ex:
        raise ModelFormatError(str(ex), path) from ex
    try:
        return model_from_dict(data)
    except ModelFormatError as ex:
        raise ModelFormatError(ex.message, path) from ex
