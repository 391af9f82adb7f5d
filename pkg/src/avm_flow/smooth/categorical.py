# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.smooth.categorical** encodes factors with sum-to-zero
contrasts, so every level effect is measured against the grand mean of its
variable rather than against a baseline level.
"""

from dataclasses import dataclass, field
from typing import Dict, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from avm_flow.base.error import ParameterError, UnseenLevelError


@dataclass(frozen=True)
class CategoricalEncoding:
    variable: str
    levels: Tuple[str, ...]
    contrast: np.ndarray = field(repr=False, compare=False)

    @property
    def index(self) -> Dict[str, int]:
        return {level: pos for pos, level in enumerate(self.levels)}

    def encode(self, values: Sequence[str]) -> np.ndarray:
        """Design rows, one per value; an unknown value is an error."""

        index = self.index
        rows = np.empty(len(values), dtype=int)
        for pos, value in enumerate(values):
            try:
                rows[pos] = index[value]
            except KeyError:
                raise UnseenLevelError(self.variable, value)
        return self.contrast[rows]

    def known(self, values: Sequence[str]) -> np.ndarray:
        index = self.index
        return np.array([value in index for value in values], dtype=bool)

    def full_coefficients(self, constrained: npt.ArrayLike) -> np.ndarray:
        return self.contrast @ np.asarray(constrained, dtype=float)


def sum_to_zero(levels: Sequence[str], variable: str = "") -> CategoricalEncoding:
    levels = tuple(levels)
    if len(set(levels)) != len(levels):
        raise ParameterError(f"{variable or 'factor'}: duplicate levels")
    if len(levels) < 2:
        raise ParameterError(
            f"{variable or 'factor'}: sum-to-zero coding needs 2 levels, got {len(levels)}"
        )

    size = len(levels)
    contrast = np.vstack([np.eye(size - 1), -np.ones((1, size - 1))])
    contrast.flags.writeable = False
    return CategoricalEncoding(variable, levels, contrast)
