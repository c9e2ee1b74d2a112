"""Shared fixtures for the gwcluster test-suite."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Callable

import numpy as np
import pytest

from gwcluster.relaxation import EmbeddingMatrix
from gwcluster.weights import WeightMatrix

REPO_ROOT = Path(__file__).resolve().parent.parent


def random_weight_matrix(size: int, seed: int) -> WeightMatrix:
    """Dense symmetric weights drawn uniformly from [0, 1)."""

    rng = np.random.default_rng(seed)
    upper = np.triu(rng.random((size, size)), k=1)
    return WeightMatrix(upper + upper.T)


def random_embedding(rank: int, count: int, seed: int) -> EmbeddingMatrix:
    rng = np.random.default_rng(seed)
    columns = rng.standard_normal((rank, count))
    return EmbeddingMatrix(columns / np.linalg.norm(columns, axis=0))


def triangle_embedding() -> EmbeddingMatrix:
    """Three coplanar unit vectors at mutual 120 degrees."""

    angles = [2.0 * math.pi * k / 3.0 for k in range(3)]
    return EmbeddingMatrix(np.array([[math.cos(a) for a in angles], [math.sin(a) for a in angles]]))


@pytest.fixture
def fixtures_dir() -> Path:
    return REPO_ROOT / "fixtures"


@pytest.fixture
def triangle_weights() -> WeightMatrix:
    return WeightMatrix(np.ones((3, 3)) - np.eye(3))


@pytest.fixture
def weights_factory() -> Callable[[int, int], WeightMatrix]:
    return random_weight_matrix
