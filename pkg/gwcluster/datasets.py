"""Synthetic two-cluster datasets: separated cubes and interlocking moons."""

from __future__ import annotations

import logging
from typing import Optional, Tuple

import numpy as np
from sklearn.datasets import make_moons

from .errors import InputValidationError
from .weights import PointSet

logger = logging.getLogger(__name__)

DEFAULT_COUNT = 100
DEFAULT_EDGE = 1.0
DEFAULT_MOON_NOISE = 0.05


def _check_count(count: int) -> None:
    if count < 2 or count % 2:
        raise InputValidationError(f"Point count must be an even number >= 2, got {count}.")


def gen_two_cubes(
    count: int = DEFAULT_COUNT,
    separation: Optional[float] = None,
    edge: float = DEFAULT_EDGE,
    seed: int = 0,
) -> Tuple[PointSet, np.ndarray]:
    """Sample ``count / 2`` points uniformly in each of two axis-aligned cubes.

    The cube centres lie ``separation`` apart along the first axis (default ``4 * edge``).
    Labels are 0 for the cube at the origin and 1 for the shifted one.
    """

    _check_count(count)
    if edge <= 0:
        raise InputValidationError(f"Cube edge must be positive, got {edge}.")
    separation = 4.0 * edge if separation is None else separation
    if separation <= 0:
        raise InputValidationError(f"Cube separation must be positive, got {separation}.")

    rng = np.random.default_rng(seed)
    half = count // 2
    offsets = rng.uniform(-edge / 2.0, edge / 2.0, size=(count, 3))
    centres = np.zeros((count, 3))
    centres[half:, 0] = separation
    labels = np.repeat([0, 1], half)

    logger.debug("Generated two cubes: %d points, edge %.3g, separation %.3g.", count, edge, separation)
    return PointSet(centres + offsets), labels


def gen_moons(
    count: int = DEFAULT_COUNT,
    noise: float = DEFAULT_MOON_NOISE,
    seed: int = 0,
) -> Tuple[PointSet, np.ndarray]:
    """Two interlocking unit half circles, the second shifted right by 1 and down by 0.5.

    Points are evenly spaced along each arc before Gaussian noise of scale ``noise``.
    """

    _check_count(count)
    if noise < 0:
        raise InputValidationError(f"Noise must be nonnegative, got {noise}.")
    points, labels = make_moons(n_samples=count, noise=noise, shuffle=False, random_state=seed)
    logger.debug("Generated moons: %d points, noise %.3g.", count, noise)
    return PointSet(points), labels.astype(int)


__all__ = ["gen_moons", "gen_two_cubes"]
