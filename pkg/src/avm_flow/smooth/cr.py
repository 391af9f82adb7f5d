# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.smooth.cr** builds the cubic regression spline basis.

Coefficients are the spline values at the knots. With knot spacings
``h``, the second derivatives at the knots are ``F β`` where
``F = [0; B⁻¹D; 0]`` (natural end conditions) and the wiggliness penalty is
``∫f''² = βᵀ Dᵀ B⁻¹ D β``. Outside the knot range the spline continues as
a straight line.
"""

from typing import NamedTuple, Tuple

import numpy as np
import numpy.typing as npt
from scipy import linalg

from avm_flow.base.error import ParameterError


class CRBasis(NamedTuple):
    basis: np.ndarray
    penalty: np.ndarray


def _knot_vector(knots: npt.ArrayLike) -> np.ndarray:
    k = np.unique(np.asarray(knots, dtype=float))
    if k.size < 3:
        raise ParameterError(
            f"cubic regression spline needs 3 distinct knots, got {k.size}"
        )
    return k


def cr_matrices(knots: npt.ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    """Returns ``(F, S)`` for sorted, distinct knots."""

    k = _knot_vector(knots)
    n = k.size
    h = np.diff(k)

    D = np.zeros((n - 2, n))
    B = np.zeros((n - 2, n - 2))
    for i in range(n - 2):
        D[i, i] = 1.0 / h[i]
        D[i, i + 1] = -1.0 / h[i] - 1.0 / h[i + 1]
        D[i, i + 2] = 1.0 / h[i + 1]
        B[i, i] = (h[i] + h[i + 1]) / 3.0
        if i + 1 < n - 2:
            B[i, i + 1] = B[i + 1, i] = h[i + 1] / 6.0

    BinvD = linalg.solve(B, D, assume_a="pos")
    F = np.vstack([np.zeros((1, n)), BinvD, np.zeros((1, n))])
    S = D.T @ BinvD
    S = (S + S.T) / 2.0
    return F, S


def cr_design(x: npt.ArrayLike, knots: npt.ArrayLike, F: np.ndarray) -> np.ndarray:
    """Evaluates the basis at ``x`` given ``F`` from :func:`cr_matrices`."""

    k = _knot_vector(knots)
    x = np.asarray(x, dtype=float).ravel()
    n = k.size
    h = np.diff(k)
    X = np.zeros((x.size, n))

    below = x < k[0]
    above = x > k[-1]
    inside = ~(below | above)

    if np.any(inside):
        xi = x[inside]
        j = np.clip(np.searchsorted(k, xi, side="right") - 1, 0, n - 2)
        hj = h[j]
        left = k[j + 1] - xi
        right = xi - k[j]
        a_minus = left / hj
        a_plus = right / hj
        c_minus = (left**3 / hj - hj * left) / 6.0
        c_plus = (right**3 / hj - hj * right) / 6.0

        rows = np.nonzero(inside)[0]
        block = c_minus[:, None] * F[j] + c_plus[:, None] * F[j + 1]
        block[np.arange(rows.size), j] += a_minus
        block[np.arange(rows.size), j + 1] += a_plus
        X[rows] = block

    if np.any(below):
        slope = -F[1] * h[0] / 6.0
        slope[0] -= 1.0 / h[0]
        slope[1] += 1.0 / h[0]
        start = np.zeros(n)
        start[0] = 1.0
        X[below] = start + (x[below] - k[0])[:, None] * slope

    if np.any(above):
        slope = F[n - 2] * h[-1] / 6.0
        slope[n - 2] -= 1.0 / h[-1]
        slope[n - 1] += 1.0 / h[-1]
        end = np.zeros(n)
        end[n - 1] = 1.0
        X[above] = end + (x[above] - k[-1])[:, None] * slope

    return X


def cr_basis(x: npt.ArrayLike, knots: npt.ArrayLike) -> CRBasis:
    """
    Natural cubic spline cardinal basis at ``x`` and its penalty.

    Duplicate knots are collapsed; fewer than three remaining knots is an
    error.
    """

    F, S = cr_matrices(knots)
    return CRBasis(cr_design(x, knots, F), S)
