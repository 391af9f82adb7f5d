# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.fit.penalized** fits penalized least squares,

    β̂ = argmin ‖y − Xβ‖² + Σⱼ λⱼ βᵀSⱼβ,

choosing the smoothing parameters by generalized cross-validation,
``V(λ) = n·RSS / (n − tr A)²``. Each ``log₁₀ λⱼ`` is searched over
``[-8, 8]`` one coordinate at a time with a bounded scalar minimiser, and
the cycle is repeated until the relative decrease of ``V`` falls below
``1e-7`` or 50 cycles have run. The search runs on penalties normalised to
the scale of their data block; reported λ are on the caller's scale.
"""

import warnings
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt
from scipy import linalg, optimize

from avm_flow.base.error import ConvergenceWarning, ParameterError
from avm_flow.fit.design import DesignRecipe, Penalty, Records, build_design
from avm_flow.fit.specs import ModelSpec

LOG_LAMBDA_BOUNDS = (-8.0, 8.0)
MAX_CYCLES = 50
TOLERANCE = 1e-7
MIN_RECORDS = 10


@dataclass(frozen=True)
class PenalizedFit:
    beta: np.ndarray = field(repr=False)
    covariance: np.ndarray = field(repr=False)
    sigma2: float
    lambdas: Tuple[float, ...]
    edf: np.ndarray = field(repr=False)
    trace: float
    rss: float
    gcv: float
    converged: bool
    n: int


@dataclass(frozen=True)
class FittedModel:
    spec: ModelSpec
    recipe: DesignRecipe = field(repr=False)
    beta_hat: np.ndarray = field(repr=False)
    covariance: np.ndarray = field(repr=False)
    sigma2_hat: float
    lambdas: Dict[str, float]
    edf: Dict[str, float]
    gcv: float
    converged: bool
    n: int

    @property
    def labels(self) -> List[str]:
        return self.recipe.labels

    def coefficients(self, block: str) -> np.ndarray:
        return self.beta_hat[self.recipe.block(block).columns]

    def block_covariance(self, block: str) -> np.ndarray:
        columns = self.recipe.block(block).columns
        return self.covariance[columns, columns]


def _embed(penalties: Sequence[Penalty], weights: Sequence[float], p: int) -> np.ndarray:
    total = np.zeros((p, p))
    for penalty, weight in zip(penalties, weights):
        total[penalty.start : penalty.stop, penalty.start : penalty.stop] += (
            weight * penalty.matrix
        )
    return total


def penalized_objective(
    beta: npt.ArrayLike,
    X: np.ndarray,
    y: np.ndarray,
    penalties: Sequence[Penalty],
    lambdas: Sequence[float],
) -> float:
    beta = np.asarray(beta, dtype=float)
    residual = y - X @ beta
    S = _embed(penalties, lambdas, X.shape[1])
    return float(residual @ residual + beta @ S @ beta)


def penalized_gradient(
    beta: npt.ArrayLike,
    X: np.ndarray,
    y: np.ndarray,
    penalties: Sequence[Penalty],
    lambdas: Sequence[float],
) -> np.ndarray:
    beta = np.asarray(beta, dtype=float)
    S = _embed(penalties, lambdas, X.shape[1])
    return -2.0 * X.T @ (y - X @ beta) + 2.0 * S @ beta


class _Solver:
    """Solves the normal equations for one set of smoothing parameters."""

    def __init__(self, X: np.ndarray, y: np.ndarray, penalties: Sequence[Penalty]):
        self.X = X
        self.y = y
        self.n, self.p = X.shape
        self.penalties = list(penalties)
        self.XtX = X.T @ X
        self.Xty = X.T @ y
        self.scales = []
        for penalty in self.penalties:
            block = slice(penalty.start, penalty.stop)
            data = np.linalg.norm(self.XtX[block, block])
            size = np.linalg.norm(penalty.matrix)
            self.scales.append(data / size if size > 0 and data > 0 else 1.0)

    def lambdas(self, log_lambdas: Sequence[float]) -> List[float]:
        return [scale * 10.0**value for scale, value in zip(self.scales, log_lambdas)]

    def solve(self, lambdas: Sequence[float]):
        M = self.XtX + _embed(self.penalties, lambdas, self.p)
        try:
            factor = linalg.cho_factor(M)
            beta = linalg.cho_solve(factor, self.Xty)
            M_inv = linalg.cho_solve(factor, np.eye(self.p))
        except linalg.LinAlgError:
            M_inv = linalg.pinvh(M)
            beta = M_inv @ self.Xty
        residual = self.y - self.X @ beta
        rss = float(residual @ residual)
        edf = np.einsum("ij,ji->i", M_inv, self.XtX)
        return beta, M_inv, rss, edf

    def gcv(self, lambdas: Sequence[float]) -> float:
        _, _, rss, edf = self.solve(lambdas)
        slack = self.n - float(edf.sum())
        if slack <= 0:
            return np.inf
        return self.n * rss / slack**2


def fit_penalized(
    X: np.ndarray,
    penalties: Sequence[Penalty],
    y: npt.ArrayLike,
    method: str = "GCV",
    lambdas: Optional[Sequence[float]] = None,
) -> PenalizedFit:
    """
    :param lambdas: Fixed smoothing parameters, one per penalty; when given
        no search is made.
    """

    if method != "GCV":
        raise ParameterError(f"unknown smoothing criterion '{method}'")
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise ParameterError("design and response disagree in length")
    if X.shape[0] < MIN_RECORDS:
        raise ParameterError(f"at least {MIN_RECORDS} records are needed, got {X.shape[0]}")
    if not np.all(np.isfinite(y)):
        raise ParameterError("response contains non-finite values")
    if not np.all(np.isfinite(X)):
        raise ParameterError("design contains non-finite values")

    solver = _Solver(X, y, penalties)
    converged = True

    if lambdas is not None:
        if len(lambdas) != len(solver.penalties):
            raise ParameterError(
                f"{len(solver.penalties)} smoothing parameters needed, got {len(lambdas)}"
            )
        if any(value < 0 for value in lambdas):
            raise ParameterError("smoothing parameters must be non-negative")
        chosen = [float(value) for value in lambdas]
    elif solver.penalties:
        log_lambdas = [0.0] * len(solver.penalties)
        best = solver.gcv(solver.lambdas(log_lambdas))
        converged = False
        for _ in range(MAX_CYCLES):
            previous = best
            for index in range(len(log_lambdas)):

                def score(value: float, index=index) -> float:
                    trial = list(log_lambdas)
                    trial[index] = value
                    return solver.gcv(solver.lambdas(trial))

                found = optimize.minimize_scalar(
                    score, bounds=LOG_LAMBDA_BOUNDS, method="bounded"
                )
                if found.fun < best:
                    best = float(found.fun)
                    log_lambdas[index] = float(found.x)
            if np.isfinite(previous) and previous - best <= TOLERANCE * abs(previous):
                converged = True
                break
        if not converged:
            warnings.warn(
                f"smoothing parameter search stopped after {MAX_CYCLES} cycles",
                ConvergenceWarning,
                stacklevel=2,
            )
        chosen = solver.lambdas(log_lambdas)
    else:
        chosen = []

    beta, M_inv, rss, edf = solver.solve(chosen)
    trace = float(edf.sum())
    slack = solver.n - trace
    if slack <= 0:
        raise ParameterError(
            f"model uses {trace:.1f} degrees of freedom on {solver.n} records"
        )
    sigma2 = rss / slack
    if not sigma2 > 0:
        sigma2 = np.finfo(float).tiny

    return PenalizedFit(
        beta=beta,
        covariance=sigma2 * M_inv,
        sigma2=float(sigma2),
        lambdas=tuple(chosen),
        edf=edf,
        trace=trace,
        rss=rss,
        gcv=solver.n * rss / slack**2,
        converged=converged,
        n=solver.n,
    )


def fit_model(
    records: Records,
    spec: ModelSpec,
    lambdas: Optional[Sequence[float]] = None,
) -> FittedModel:
    X, penalties, y, recipe = build_design(records, spec)
    result = fit_penalized(X, penalties, y, lambdas=lambdas)
    return FittedModel(
        spec=spec,
        recipe=recipe,
        beta_hat=result.beta,
        covariance=result.covariance,
        sigma2_hat=result.sigma2,
        lambdas={
            penalty.block: value for penalty, value in zip(penalties, result.lambdas)
        },
        edf={
            block.name: float(result.edf[block.columns].sum()) for block in recipe.blocks
        },
        gcv=result.gcv,
        converged=result.converged,
        n=result.n,
    )
