"""Point sets and the dissimilarity weight matrix W built from them."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputValidationError
from .models import DistanceMetric

logger = logging.getLogger(__name__)

SYMMETRY_RTOL = 1e-9


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class PointSet:
    """``count`` points of dimension ``dim`` stored row-wise in ``points``."""

    points: np.ndarray

    def __post_init__(self) -> None:
        array = np.asarray(self.points, dtype=float)
        if array.ndim != 2 or array.shape[1] < 1:
            raise InputValidationError("Points must form a 2-D array with at least one coordinate.")
        if not np.all(np.isfinite(array)):
            raise InputValidationError("Points must be finite.")
        object.__setattr__(self, "points", _frozen(array))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]) -> "PointSet":
        """Build from ragged input, rejecting rows of unequal length."""

        if not rows:
            raise InputValidationError("A point set needs at least one point.")
        dim = len(rows[0])
        for index, row in enumerate(rows):
            if len(row) != dim:
                raise InputValidationError(
                    f"Point {index} has dimension {len(row)}, expected {dim}."
                )
        return cls(np.asarray(rows, dtype=float))

    @property
    def count(self) -> int:
        return int(self.points.shape[0])

    @property
    def dim(self) -> int:
        return int(self.points.shape[1])


@dataclass(frozen=True)
class WeightMatrix:
    """Symmetric, zero-diagonal, nonnegative dissimilarity matrix."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", _frozen(self.entries))

    @property
    def size(self) -> int:
        return int(self.entries.shape[0])

    @property
    def total_weight(self) -> float:
        """Sum of w_ij over pairs i < j."""

        return float(np.triu(self.entries, k=1).sum())

    @property
    def is_degenerate(self) -> bool:
        return not np.any(self.entries)


def build_weight_matrix(
    points: PointSet, metric: DistanceMetric = DistanceMetric.EUCLIDEAN
) -> WeightMatrix:
    """Return the pairwise distance matrix of ``points``."""

    if points.count < 2:
        raise InputValidationError(f"Clustering needs at least 2 points, got {points.count}.")

    coords = points.points
    diff = coords[:, None, :] - coords[None, :, :]
    squared = np.einsum("ijk,ijk->ij", diff, diff)
    entries = squared if metric is DistanceMetric.SQUARED_EUCLIDEAN else np.sqrt(squared)
    # Mirror the upper triangle so symmetry is exact.
    upper = np.triu(entries, k=1)
    entries = upper + upper.T

    weights = WeightMatrix(entries)
    if weights.is_degenerate:
        logger.warning("All %d points coincide; the weight matrix is identically zero.", points.count)
    logger.debug("Built %s weight matrix of size %d.", metric.value, weights.size)
    return weights


def validate_weights(raw: np.ndarray | Sequence[Sequence[float]]) -> WeightMatrix:
    """Check an externally supplied matrix and wrap it as a :class:`WeightMatrix`.

    Entries within ``SYMMETRY_RTOL`` (relative) of their transpose are averaged to exact
    symmetry. Errors name the first offending index pair.
    """

    matrix = np.asarray(raw, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InputValidationError(f"Weight matrix must be square, got shape {matrix.shape}.")
    if matrix.shape[0] < 1:
        raise InputValidationError("Weight matrix is empty.")

    bad = np.argwhere(~np.isfinite(matrix))
    if bad.size:
        i, j = (int(v) for v in bad[0])
        raise InputValidationError(f"Entry ({i},{j}) is not finite.", index_pair=(i, j))

    diagonal = np.flatnonzero(np.diag(matrix) != 0.0)
    if diagonal.size:
        i = int(diagonal[0])
        raise InputValidationError(
            f"Diagonal entry ({i},{i}) is {matrix[i, i]!r}; dissimilarities need a zero diagonal.",
            index_pair=(i, i),
        )

    negative = np.argwhere(matrix < 0)
    if negative.size:
        i, j = (int(v) for v in negative[0])
        raise InputValidationError(
            f"Entry ({i},{j}) is negative ({matrix[i, j]!r}).", index_pair=(i, j)
        )

    scale = np.maximum(np.abs(matrix), np.abs(matrix.T))
    asymmetric = np.argwhere(np.abs(matrix - matrix.T) > SYMMETRY_RTOL * scale)
    if asymmetric.size:
        i, j = (int(v) for v in asymmetric[0])
        raise InputValidationError(
            f"Entries ({i},{j}) and ({j},{i}) differ: {matrix[i, j]!r} vs {matrix[j, i]!r}.",
            index_pair=(i, j),
        )

    weights = WeightMatrix((matrix + matrix.T) / 2.0)
    if weights.is_degenerate:
        logger.warning("Supplied weight matrix is identically zero.")
    return weights


__all__ = [
    "PointSet",
    "SYMMETRY_RTOL",
    "WeightMatrix",
    "build_weight_matrix",
    "validate_weights",
]
