# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.fit.scalings** reports coefficients as relative scalings:
``exp(coefficient)``, where 1 means no impact. Categorical levels are
recovered from their sum-to-zero contrasts, so each scaling is relative to
the grand mean of its variable.
"""

from typing import Dict, List

import numpy as np
import numpy.typing as npt
import pandas as pd
from scipy import stats

from avm_flow.base.error import ParameterError
from avm_flow.fit.penalized import FittedModel

Z95 = float(stats.norm.ppf(0.975))

SCALING_COLUMNS = ["term", "level", "coefficient", "se", "scaling", "lower", "upper"]


def _rows(term: str, labels, coefficients, variances) -> List[Dict]:
    se = np.sqrt(np.maximum(variances, 0.0))
    return [
        {
            "term": term,
            "level": label,
            "coefficient": float(coef),
            "se": float(err),
            "scaling": float(np.exp(coef)),
            "lower": float(np.exp(coef - Z95 * err)),
            "upper": float(np.exp(coef + Z95 * err)),
        }
        for label, coef, err in zip(labels, coefficients, se)
    ]


def coefficient_scalings(model: FittedModel) -> pd.DataFrame:
    """
    One row per linear term, categorical level and postcode-change dummy,
    with the estimate and the 95% interval ``exp(β ± 1.96·se)``.
    """

    rows: List[Dict] = []
    recipe = model.recipe

    if recipe.linear:
        rows.extend(
            _rows(
                "linear",
                recipe.linear,
                model.coefficients("linear"),
                np.diag(model.block_covariance("linear")),
            )
        )

    for encoding in recipe.categoricals:
        contrast = encoding.contrast
        beta = contrast @ model.coefficients(encoding.variable)
        cov = contrast @ model.block_covariance(encoding.variable) @ contrast.T
        rows.extend(_rows(encoding.variable, encoding.levels, beta, np.diag(cov)))

    if recipe.changes:
        rows.extend(
            _rows(
                "changes",
                recipe.changes,
                model.coefficients("changes"),
                np.diag(model.block_covariance("changes")),
            )
        )

    return pd.DataFrame(rows, columns=SCALING_COLUMNS)


def premium(scaling_a: float, scaling_b: float) -> float:
    """
    Premium of ``a`` over ``b`` in percent, ``(1 - b/a)·100``. ``a`` must be
    the larger scaling.
    """

    if not (scaling_a > 0 and scaling_b > 0):
        raise ParameterError("scalings must be positive")
    if scaling_a < scaling_b:
        raise ParameterError(
            f"premium of {scaling_a} over the larger scaling {scaling_b} is undefined"
        )
    return (1.0 - scaling_b / scaling_a) * 100.0


def smooth_effects(model: FittedModel, term: str, grid: npt.ArrayLike) -> pd.DataFrame:
    """
    The fitted, centred smooth of covariate ``term`` on ``grid`` with a
    pointwise 95% band from the coefficient covariance.
    """

    for smooth in model.recipe.smooths:
        if smooth.covariate == term:
            break
    else:
        raise ParameterError(f"model {model.spec.name} has no smooth of '{term}'")

    x = np.asarray(grid, dtype=float).ravel()
    block = f"s({term})"
    rows = smooth.rows(x)
    effect = rows @ model.coefficients(block)
    se = np.sqrt(
        np.maximum(np.einsum("ij,jk,ik->i", rows, model.block_covariance(block), rows), 0)
    )
    return pd.DataFrame(
        {
            "x": x,
            "effect": effect,
            "se": se,
            "lower": effect - Z95 * se,
            "upper": effect + Z95 * se,
        }
    )
