"""Exhaustive MaxCut oracle."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from gwcluster.datasets import gen_two_cubes
from gwcluster.errors import CapacityError
from gwcluster.oracle import MAX_EXACT_SIZE, brute_force_maxcut
from gwcluster.pipeline import label_agreement
from gwcluster.rounding import cut_value
from gwcluster.weights import PointSet, WeightMatrix, build_weight_matrix

from .conftest import random_weight_matrix


def _loop_maxcut(weights: WeightMatrix) -> float:
    best = 0.0
    for tail in itertools.product([1, -1], repeat=weights.size - 1):
        best = max(best, cut_value(weights, (1, *tail)))
    return best


def test_single_edge() -> None:
    result = brute_force_maxcut(WeightMatrix(np.array([[0.0, 2.5], [2.5, 0.0]])))
    assert result.value == 2.5
    assert result.partition.signs == (1, -1)
    assert result.enumerated == 2


def test_triangle(triangle_weights: WeightMatrix) -> None:
    result = brute_force_maxcut(triangle_weights)
    assert result.value == 2.0
    assert result.partition.signs[0] == 1
    assert result.enumerated == 4


def test_ties_go_to_the_smallest_code(triangle_weights: WeightMatrix) -> None:
    # Code 1 flips index 1 alone, the first optimal partition in enumeration order.
    assert brute_force_maxcut(triangle_weights).partition.signs == (1, -1, 1)


def test_complete_bipartite_structure() -> None:
    left, right = [0, 1, 2], [3, 4, 5]
    entries = np.zeros((6, 6))
    for i in left:
        for j in right:
            entries[i, j] = entries[j, i] = 1.0
    result = brute_force_maxcut(WeightMatrix(entries))
    assert result.value == 9.0
    assert result.partition.signs == (1, 1, 1, -1, -1, -1)


@pytest.mark.parametrize("seed", range(6))
def test_matches_double_loop(seed: int) -> None:
    weights = random_weight_matrix(8, seed)
    result = brute_force_maxcut(weights)
    assert result.value == pytest.approx(_loop_maxcut(weights), rel=1e-12)
    assert result.value == pytest.approx(cut_value(weights, result.partition.signs))


def test_zero_weights_pick_all_positive() -> None:
    result = brute_force_maxcut(WeightMatrix(np.zeros((4, 4))))
    assert result.value == 0.0
    assert result.partition.signs == (1, 1, 1, 1)


@pytest.mark.slow
def test_thread_count_does_not_change_the_answer() -> None:
    weights = random_weight_matrix(18, 3)
    assert brute_force_maxcut(weights) == brute_force_maxcut(weights, threads=4)


def test_rejects_oversized_input() -> None:
    with pytest.raises(CapacityError):
        brute_force_maxcut(random_weight_matrix(MAX_EXACT_SIZE + 1, 0))


@pytest.mark.parametrize("seed", range(3))
def test_planted_cube_split_is_exact_on_subsamples(seed: int) -> None:
    points, labels = gen_two_cubes(100, separation=10.0, seed=seed)
    rng = np.random.default_rng(seed)
    picked = np.concatenate(
        [rng.choice(np.flatnonzero(labels == side), size=8, replace=False) for side in (0, 1)]
    )
    result = brute_force_maxcut(build_weight_matrix(PointSet(points.points[picked])))
    assert label_agreement(result.partition.signs, labels[picked]) == 1.0
