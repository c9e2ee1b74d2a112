"""Vector relaxation of MaxCut solved by low-rank coordinate descent.

The relaxed problem maximises ``1/2 sum_{i<j} w_ij (1 - <v_i, v_j>)`` over unit vectors v_i,
equivalently minimises ``1/4 tr(W X)`` with ``X = V^T V`` and ``diag(X) = 1``. The solver keeps
V explicitly (rank ``k`` rows, one column per index) and sweeps the columns, replacing each with
the unit vector that minimises its share of the trace term:

    v_i <- -normalize(sum_j w_ij v_j)

Each update is an exact block minimisation, so the objective never decreases. Any rank of at
least ``ceil(sqrt(2 m))`` is enough for the stationary points reached this way to be SDP
optimal in practice; the default uses the full rank ``m``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import scipy.linalg

from .errors import InputValidationError, NumericError
from .models import RelaxationReport, SolverConfig
from .weights import WeightMatrix

logger = logging.getLogger(__name__)

UNIT_NORM_TOL = 1e-8
SYMMETRY_TOL = 1e-9
PSD_EIGEN_TOL = 1e-7
CHOLESKY_JITTER = 1e-10


@dataclass(frozen=True)
class EmbeddingMatrix:
    """Matrix V whose ``count`` columns are unit vectors in ``ambient_dim`` dimensions."""

    columns: np.ndarray

    def __post_init__(self) -> None:
        array = np.array(self.columns, dtype=float, copy=True)
        if array.ndim != 2 or min(array.shape) < 1:
            raise InputValidationError(f"Embedding must be a nonempty 2-D array, got {array.shape}.")
        norms = np.linalg.norm(array, axis=0)
        off = np.flatnonzero(np.abs(norms - 1.0) > UNIT_NORM_TOL)
        if off.size:
            raise NumericError(
                f"Embedding column {int(off[0])} has norm {norms[off[0]]!r}, expected 1."
            )
        array.setflags(write=False)
        object.__setattr__(self, "columns", array)

    @property
    def ambient_dim(self) -> int:
        return int(self.columns.shape[0])

    @property
    def count(self) -> int:
        return int(self.columns.shape[1])

    def restrict(self, count: int) -> "EmbeddingMatrix":
        """Keep the first ``count`` columns (drops padded phantom indices)."""

        return EmbeddingMatrix(self.columns[:, :count])

    def as_points(self) -> np.ndarray:
        """Columns as rows, i.e. one data point per index."""

        return np.array(self.columns.T)


def _check_sizes(weights: WeightMatrix, embedding: EmbeddingMatrix) -> None:
    if embedding.count != weights.size:
        raise InputValidationError(
            f"Embedding has {embedding.count} columns but the weight matrix has size {weights.size}."
        )


def _objective(entries: np.ndarray, columns: np.ndarray) -> float:
    gram = columns.T @ columns
    return 0.25 * float(np.sum(entries * (1.0 - gram)))


def relaxed_objective(weights: WeightMatrix, embedding: EmbeddingMatrix) -> float:
    """Evaluate ``1/2 sum_{i<j} w_ij (1 - <v_i, v_j>)``."""

    _check_sizes(weights, embedding)
    return _objective(weights.entries, embedding.columns)


def _stationarity_residuals(entries: np.ndarray, columns: np.ndarray) -> np.ndarray:
    """Distance of each v_i from ``-normalize(sum_j w_ij v_j)``; zero where that sum vanishes."""

    fields = columns @ entries
    norms = np.linalg.norm(fields, axis=0)
    scale = np.abs(entries).sum(axis=0)
    active = norms > 1e-14 * np.maximum(scale, 1e-300)
    residuals = np.zeros(columns.shape[1])
    if np.any(active):
        target = -fields[:, active] / norms[active]
        residuals[active] = np.linalg.norm(columns[:, active] - target, axis=0)
    return residuals


def _initial_columns(rank: int, count: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    columns = rng.standard_normal((rank, count))
    norms = np.linalg.norm(columns, axis=0)
    # A zero draw has probability zero; fall back to the first basis vector all the same.
    zero = norms == 0.0
    columns[:, zero] = 0.0
    columns[0, zero] = 1.0
    norms[zero] = 1.0
    return columns / norms


def solve_relaxation_report(
    weights: WeightMatrix, config: SolverConfig | None = None
) -> Tuple[EmbeddingMatrix, RelaxationReport]:
    """Solve the relaxation and return the embedding with its solver report.

    Non-convergence within ``max_sweeps`` is reported through ``converged=False`` and a
    warning; the last (best) iterate is still returned.
    """

    config = config or SolverConfig()
    entries = weights.entries
    count = weights.size
    rank = config.rank or count
    if rank < math.ceil(math.sqrt(2 * count)):
        logger.debug("Rank %d is below ceil(sqrt(2m)) for m=%d; stationary points may be suboptimal.", rank, count)

    columns = _initial_columns(rank, count, config.seed)
    column_scale = np.abs(entries).sum(axis=0)
    active = np.flatnonzero(column_scale > 0)

    objective = _objective(entries, columns)
    history = [objective]
    converged = False
    sweeps = 0
    residual = float("inf")

    for sweeps in range(1, config.max_sweeps + 1):
        for i in active:
            field = columns @ entries[:, i]
            norm = float(np.linalg.norm(field))
            if norm <= 1e-14 * column_scale[i]:
                continue
            columns[:, i] = -field / norm

        previous, objective = objective, _objective(entries, columns)
        history.append(objective)
        logger.debug("Sweep %d objective %.12g", sweeps, objective)

        change = abs(objective - previous) / max(abs(objective), 1e-300)
        if change < config.objective_tol:
            residual = float(_stationarity_residuals(entries, columns).max(initial=0.0))
            if residual <= config.stationarity_tol:
                converged = True
                break

    if not converged:
        residual = float(_stationarity_residuals(entries, columns).max(initial=0.0))
        logger.warning(
            "Relaxation did not converge in %d sweeps (objective %.10g, residual %.3g).",
            sweeps,
            objective,
            residual,
        )
    else:
        logger.info("Relaxation converged after %d sweeps with objective %.10g.", sweeps, objective)

    # Re-normalise to absorb rounding drift accumulated over the sweeps.
    columns /= np.linalg.norm(columns, axis=0)
    embedding = EmbeddingMatrix(columns)
    report = RelaxationReport(
        ambient_dim=embedding.ambient_dim,
        count=embedding.count,
        objective=objective,
        converged=converged,
        sweeps=sweeps,
        max_stationarity_residual=residual,
        objective_history=history,
    )
    return embedding, report


def solve_relaxation(weights: WeightMatrix, config: SolverConfig | None = None) -> EmbeddingMatrix:
    """Return a stationary embedding of the relaxed MaxCut problem."""

    embedding, _ = solve_relaxation_report(weights, config)
    return embedding


def pad_weights(weights: WeightMatrix, size: int) -> WeightMatrix:
    """Embed W in the leading block of a ``size`` x ``size`` zero matrix."""

    if size < weights.size:
        raise InputValidationError(
            f"Cannot pad a matrix of size {weights.size} down to {size}."
        )
    if size == weights.size:
        return weights
    padded = np.zeros((size, size))
    padded[: weights.size, : weights.size] = weights.entries
    logger.debug("Padded weight matrix from %d to %d.", weights.size, size)
    return WeightMatrix(padded)


def gram_matrix(embedding: EmbeddingMatrix) -> np.ndarray:
    """Return ``X = V^T V``."""

    gram = embedding.columns.T @ embedding.columns
    return (gram + gram.T) / 2.0


def cholesky_embed(gram: np.ndarray) -> EmbeddingMatrix:
    """Factor a unit-diagonal PSD matrix ``X`` into ``V^T V`` and return V.

    Singular inputs get a small diagonal jitter before factoring, after which the columns
    are normalised back onto the unit sphere.
    """

    matrix = np.asarray(gram, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InputValidationError(f"Gram matrix must be square, got shape {matrix.shape}.")
    if np.max(np.abs(matrix - matrix.T), initial=0.0) > SYMMETRY_TOL:
        raise InputValidationError("Gram matrix is not symmetric.")
    if np.max(np.abs(np.diag(matrix) - 1.0), initial=0.0) > UNIT_NORM_TOL:
        raise InputValidationError("Gram matrix must have a unit diagonal.")

    matrix = (matrix + matrix.T) / 2.0
    smallest = float(np.linalg.eigvalsh(matrix)[0])
    if smallest < -PSD_EIGEN_TOL:
        raise NumericError(f"Gram matrix is indefinite (smallest eigenvalue {smallest:.3e}).")

    try:
        lower = scipy.linalg.cholesky(matrix, lower=True)
    except np.linalg.LinAlgError:
        jitter = CHOLESKY_JITTER + max(0.0, -smallest)
        logger.debug("Gram matrix is singular; factoring with diagonal jitter %.1e.", jitter)
        lower = scipy.linalg.cholesky(matrix + jitter * np.eye(matrix.shape[0]), lower=True)
        lower /= np.linalg.norm(lower, axis=1, keepdims=True)

    return EmbeddingMatrix(lower.T)


__all__ = [
    "EmbeddingMatrix",
    "cholesky_embed",
    "gram_matrix",
    "pad_weights",
    "relaxed_objective",
    "solve_relaxation",
    "solve_relaxation_report",
]
