"""One GW clustering pass and its recursive re-embedding.

A pass builds weights from points, optionally pads them to a larger dimension, solves the
relaxation, rounds it, and projects the embedding columns onto their principal axes. The
recursion feeds those principal coordinates (or the raw columns) back in as the next dataset.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import InputValidationError
from .models import (
    ClusterQuality,
    CutPartition,
    PipelineConfig,
    RecurseOn,
    RelaxationReport,
    RoundingReport,
)
from .relaxation import EmbeddingMatrix, pad_weights, solve_relaxation_report
from .rounding import make_partition, round_best, round_points_baseline
from .weights import PointSet, WeightMatrix, build_weight_matrix

logger = logging.getLogger(__name__)

QUALITY_EPSILON = 1e-12
DEGENERATE_SPREAD = 1e-12


@dataclass(frozen=True)
class PrincipalAxes:
    """Fitted principal directions (rows of ``components``) and their variances."""

    mean: np.ndarray
    components: np.ndarray
    explained_variance: np.ndarray

    def transform(self, data: np.ndarray) -> np.ndarray:
        return (np.asarray(data, dtype=float) - self.mean) @ self.components.T

    def inverse_transform(self, coords: np.ndarray) -> np.ndarray:
        return np.asarray(coords, dtype=float) @ self.components + self.mean


def pca_fit(points: PointSet, dim: int) -> PrincipalAxes:
    """Fit the top ``dim`` principal axes by SVD of the centred data.

    Each axis is signed so that its largest-magnitude loading is positive.
    """

    if points.count < 2:
        raise InputValidationError(f"PCA needs at least 2 points, got {points.count}.")
    if not 1 <= dim <= points.dim:
        raise InputValidationError(
            f"Cannot project {points.dim}-dimensional data onto {dim} components."
        )

    mean = points.points.mean(axis=0)
    centred = points.points - mean
    _, singular, vt = np.linalg.svd(centred, full_matrices=True)

    components = np.array(vt[:dim])
    for row in components:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1.0

    variances = np.zeros(dim)
    top = min(dim, singular.size)
    variances[:top] = singular[:top] ** 2 / (points.count - 1)
    return PrincipalAxes(mean=mean, components=components, explained_variance=variances)


def pca_project(points: PointSet, dim: int) -> Tuple[PointSet, List[float]]:
    """Project onto the top ``dim`` principal directions; variances come back in descending order."""

    axes = pca_fit(points, dim)
    return PointSet(axes.transform(points.points)), [float(v) for v in axes.explained_variance]


def cluster_quality(coords: np.ndarray, signs: Sequence[int]) -> ClusterQuality:
    """Pooled within-cluster variance, centroid distance and their ratio."""

    coords = np.asarray(coords, dtype=float)
    signs = np.asarray(signs)
    within = 0.0
    centroids = []
    for side in (1, -1):
        members = coords[signs == side]
        if members.size:
            centroid = members.mean(axis=0)
            centroids.append(centroid)
            within += float(np.sum((members - centroid) ** 2))
    within /= coords.shape[0]
    between = float(np.linalg.norm(centroids[0] - centroids[1])) if len(centroids) == 2 else 0.0
    return ClusterQuality(
        within_cluster_variance=within,
        between_centroid_distance=between,
        separation_ratio=between / (np.sqrt(within) + QUALITY_EPSILON),
    )


def label_agreement(signs: Sequence[int], labels: Sequence[int]) -> float:
    """Fraction of indices whose cluster matches ``labels`` (0/1), best over the global flip."""

    signs = np.asarray(signs)
    labels = np.asarray(labels)
    if signs.shape != labels.shape:
        raise InputValidationError(
            f"Partition has {signs.size} entries but {labels.size} labels were given."
        )
    agree = float(np.mean((signs == -1).astype(int) == labels))
    return max(agree, 1.0 - agree)


@dataclass(frozen=True)
class IterationResult:
    """Everything produced by one pass, restricted to the original indices."""

    index: int
    points: Optional[PointSet]
    embedding: EmbeddingMatrix
    partition: CutPartition
    pca_coords: PointSet
    explained_variance: List[float]
    quality: ClusterQuality
    relaxation: RelaxationReport
    rounding: RoundingReport


def run_gwa_once(points: PointSet, config: PipelineConfig, *, index: int = 0) -> IterationResult:
    """Weights, optional padding, relaxation, rounding, then PCA of the embedding columns."""

    weights = build_weight_matrix(points, config.metric)
    return run_gwa_weights(weights, config, points=points, index=index)


def run_gwa_weights(
    weights: WeightMatrix,
    config: PipelineConfig,
    *,
    points: Optional[PointSet] = None,
    index: int = 0,
) -> IterationResult:
    """One pass on an explicit weight matrix; ``points`` only feeds the raw-data baseline."""

    size = weights.size
    padded = pad_weights(weights, config.pad_to) if config.pad_to else weights

    solver = config.solver.model_copy(update={"seed": config.seed})
    full_embedding, relaxation = solve_relaxation_report(padded, solver)
    rounding = round_best(full_embedding, padded, config.trials, config.seed, threads=config.threads)

    # Phantom padded indices carry zero weight; drop them before anything is reported.
    partition = make_partition(weights, rounding.best.signs[:size])
    embedding = full_embedding.restrict(size)
    rounding = rounding.model_copy(
        update={
            "best": partition,
            "raw_mean_cut": (
                round_points_baseline(points, weights, config.trials, config.seed)
                if points is not None
                else None
            ),
        }
    )

    pca_coords, explained = pca_project(PointSet(embedding.as_points()), config.pca_dim)
    quality = cluster_quality(pca_coords.points, partition.signs)
    logger.info(
        "Iteration %d: cut %.6g, separation ratio %.4g (m=%d).",
        index,
        partition.cut_value,
        quality.separation_ratio,
        padded.size,
    )
    return IterationResult(
        index=index,
        points=points,
        embedding=embedding,
        partition=partition,
        pca_coords=pca_coords,
        explained_variance=explained,
        quality=quality,
        relaxation=relaxation,
        rounding=rounding,
    )


def run_recursive(points: PointSet, config: PipelineConfig) -> List[IterationResult]:
    """Run ``config.iterations`` passes, each on the output of the previous one.

    A pass whose next input collapses to a single point ends the recursion early.
    """

    results: List[IterationResult] = []
    current = points
    for index in range(config.iterations):
        result = run_gwa_once(current, config, index=index)
        results.append(result)
        if index == config.iterations - 1:
            break

        if config.recurse_on is RecurseOn.PCA:
            current = result.pca_coords
        else:
            current = PointSet(result.embedding.as_points())

        spread = float(np.ptp(current.points, axis=0).max())
        if spread <= DEGENERATE_SPREAD:
            logger.warning(
                "Iteration %d collapsed every point together; stopping after %d iterations.",
                index,
                len(results),
            )
            break
        logger.debug("Iteration %d quality: %s", index, result.quality.model_dump())

    return results


def compare_dimensions(
    points: PointSet, config: PipelineConfig, dimensions: Sequence[int]
) -> Dict[int, List[IterationResult]]:
    """Run the recursion once per padding dimension (a dimension equal to n means no padding)."""

    runs: Dict[int, List[IterationResult]] = {}
    for dimension in dimensions:
        if dimension < points.count:
            raise InputValidationError(
                f"Padding dimension {dimension} is below the point count {points.count}."
            )
        padded_config = config.model_copy(update={"pad_to": dimension})
        runs[dimension] = run_recursive(points, padded_config)
    return runs


__all__ = [
    "IterationResult",
    "PrincipalAxes",
    "cluster_quality",
    "compare_dimensions",
    "label_agreement",
    "pca_fit",
    "pca_project",
    "run_gwa_once",
    "run_gwa_weights",
    "run_recursive",
]
