# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.eval.moran** measures spatial autocorrelation of residuals
with global Moran's I,

    I = (n / S₀) · Σᵢⱼ wᵢⱼ (eᵢ − ē)(eⱼ − ē) / Σᵢ (eᵢ − ē)²,

over k-nearest-neighbour weights (10 by default, row-standardised).
"""

import warnings
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import esda
import libpysal
import numpy as np
import numpy.typing as npt
from scipy.spatial import cKDTree

from avm_flow.base.error import ParameterError

DEFAULT_NEIGHBOURS = 10


@dataclass(frozen=True)
class SpatialWeights:
    """Neighbour indices and weights per record, without self-weights."""

    w: libpysal.weights.W
    row_standardized: bool

    @property
    def n(self) -> int:
        return int(self.w.n)

    def neighbours(self, index: int):
        return list(self.w.neighbors[index]), list(self.w.weights[index])

    @staticmethod
    def from_lists(
        neighbours: Sequence[Sequence[int]],
        weights: Optional[Sequence[Sequence[float]]] = None,
        row_standardize: bool = True,
    ) -> "SpatialWeights":
        ids: Dict[int, List[int]] = {}
        values: Dict[int, List[float]] = {}
        for index, row in enumerate(neighbours):
            row = [int(j) for j in row]
            if index in row:
                raise ParameterError(f"record {index} lists itself as a neighbour")
            given = [1.0] * len(row) if weights is None else [float(v) for v in weights[index]]
            if row_standardize and row:
                total = sum(given)
                given = [value / total for value in given]
            ids[index] = row
            values[index] = given
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            w = libpysal.weights.W(ids, values, id_order=list(range(len(ids))))
        return SpatialWeights(w, row_standardize)

    @staticmethod
    def from_neighbours(
        coords: npt.ArrayLike, k: int = DEFAULT_NEIGHBOURS, row_standardize: bool = True
    ) -> "SpatialWeights":
        """Binary k-nearest-neighbour weights on planar coordinates."""

        coords = np.atleast_2d(np.asarray(coords, dtype=float))
        n = coords.shape[0]
        if n < 2:
            raise ParameterError("spatial weights need at least 2 records")
        k = min(k, n - 1)
        _, index = cKDTree(coords).query(coords, k=k + 1)
        index = np.atleast_2d(index)
        keep = index != np.arange(n)[:, None]
        no_self = keep.all(axis=1)
        keep[no_self, -1] = False
        return SpatialWeights.from_lists(
            index[keep].reshape(n, k).tolist(), row_standardize=row_standardize
        )


def _centred(residuals: npt.ArrayLike, weights: SpatialWeights) -> np.ndarray:
    e = np.asarray(residuals, dtype=float).ravel()
    if e.size < 3:
        raise ParameterError("Moran's I needs at least 3 records")
    if e.size != weights.n:
        raise ParameterError("residuals and weights differ in length")
    e = e - e.mean()
    if not np.any(np.abs(e) > 1e-12 * max(1.0, float(np.abs(e).max()))):
        raise ParameterError("Moran's I is undefined for constant residuals")
    return e


def morans_i(residuals: npt.ArrayLike, weights: SpatialWeights) -> float:
    e = _centred(residuals, weights)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return float(esda.Moran(e, weights.w, transformation="o", permutations=0).I)


@dataclass(frozen=True)
class MoranTest:
    i: float
    expected: float
    mean: float
    sd: float
    z: float
    p_value: float
    permutations: int


def morans_i_test(
    residuals: npt.ArrayLike,
    weights: SpatialWeights,
    permutations: int = 999,
    seed: int = 0,
) -> MoranTest:
    """
    Permutation inference: residuals are shuffled over locations with a
    seeded generator; the pseudo p-value is one-sided in the direction of
    the observed statistic.
    """

    if permutations < 1:
        raise ParameterError("at least one permutation is needed")
    e = _centred(residuals, weights)
    n = e.size
    W = weights.w.sparse.tocsr()
    scale = n / W.sum() / float(e @ e)

    observed = morans_i(e, weights)
    rng = np.random.default_rng(seed)
    replicates = np.empty(permutations)
    for step in range(permutations):
        shuffled = rng.permutation(e)
        replicates[step] = scale * float(shuffled @ (W @ shuffled))

    mean = float(replicates.mean())
    sd = float(replicates.std(ddof=1)) if permutations > 1 else 0.0
    if observed >= mean:
        extreme = int(np.sum(replicates >= observed))
    else:
        extreme = int(np.sum(replicates <= observed))
    return MoranTest(
        i=observed,
        expected=-1.0 / (n - 1),
        mean=mean,
        sd=sd,
        z=(observed - mean) / sd if sd > 0 else float("nan"),
        p_value=(extreme + 1) / (permutations + 1),
        permutations=permutations,
    )
