"""Hyperplane rounding, cut evaluation and the alpha constant."""

from __future__ import annotations

import logging
import math

import numpy as np
import pytest
from pydantic import ValidationError
from scipy import stats

from gwcluster.errors import InputValidationError
from gwcluster.models import CutPartition, RoundingReport, SolverConfig
from gwcluster.oracle import brute_force_maxcut
from gwcluster.relaxation import EmbeddingMatrix, relaxed_objective, solve_relaxation
from gwcluster.rounding import (
    alpha_constant,
    alpha_minimizer,
    cut_value,
    expected_cut,
    make_partition,
    quadratic_cut_value,
    round_best,
    round_once,
    round_points_baseline,
    sample_hyperplane_normal,
    separation_probability,
    trial_generators,
)
from gwcluster.weights import PointSet, WeightMatrix, build_weight_matrix

from .conftest import random_embedding, random_weight_matrix, triangle_embedding

EDGE = WeightMatrix(np.array([[0.0, 1.0], [1.0, 0.0]]))


def test_alpha_constant_value() -> None:
    assert alpha_constant() == pytest.approx(0.87856, abs=1e-5)


def test_alpha_minimizer_matches_closed_form() -> None:
    result = alpha_minimizer()
    assert result.theta == pytest.approx(2.331122, abs=1e-6)
    assert result.closed_form == pytest.approx(result.alpha, abs=1e-12)
    assert (1.0 - math.cos(result.theta)) == pytest.approx(result.theta * math.sin(result.theta), abs=1e-12)


def test_alpha_ratio_is_minimal_on_a_grid() -> None:
    thetas = np.linspace(0.05, math.pi, 20001)
    ratios = 2.0 * thetas / (math.pi * (1.0 - np.cos(thetas)))
    assert alpha_constant() <= ratios.min() + 1e-9


@pytest.mark.parametrize("dim", [1, 2, 5, 40])
def test_hyperplane_normal_is_unit(dim: int) -> None:
    normal = sample_hyperplane_normal(dim, np.random.default_rng(dim))
    assert normal.shape == (dim,)
    assert np.linalg.norm(normal) == pytest.approx(1.0)


def test_trial_generators_depend_only_on_seed_and_index() -> None:
    short = [rng.random() for rng in trial_generators(3, 4)]
    long = [rng.random() for rng in trial_generators(3, 10)]
    assert short == long[:4]


def test_cut_value_of_triangle(triangle_weights: WeightMatrix) -> None:
    assert cut_value(triangle_weights, [1, 1, -1]) == 2.0
    assert cut_value(triangle_weights, [1, 1, 1]) == 0.0


@pytest.mark.parametrize("seed", range(5))
def test_cut_value_matches_quadratic_form(seed: int) -> None:
    weights = random_weight_matrix(9, seed)
    signs = np.random.default_rng(seed).choice([-1, 1], size=9)
    assert cut_value(weights, signs) == pytest.approx(quadratic_cut_value(weights, signs))


def test_cut_value_is_flip_invariant() -> None:
    weights = random_weight_matrix(6, 2)
    partition = make_partition(weights, [1, -1, -1, 1, 1, -1])
    assert cut_value(weights, partition.flipped().signs) == pytest.approx(partition.cut_value)


def test_cut_value_rejects_wrong_length(triangle_weights: WeightMatrix) -> None:
    with pytest.raises(InputValidationError):
        cut_value(triangle_weights, [1, -1])


def test_round_once_splits_triangle(triangle_weights: WeightMatrix) -> None:
    partition = round_once(triangle_embedding(), triangle_weights, np.array([1.0, 0.0]))
    assert partition.signs == (1, -1, -1)
    assert partition.cut_value == 2.0


def test_round_once_puts_ties_on_the_positive_side() -> None:
    partition = round_once(EmbeddingMatrix(np.eye(2)), EDGE, np.array([1.0, 0.0]))
    assert partition.signs == (1, 1)
    assert partition.cut_value == 0.0


def test_round_once_rejects_bad_normal(triangle_weights: WeightMatrix) -> None:
    with pytest.raises(InputValidationError):
        round_once(triangle_embedding(), triangle_weights, np.ones(3))


def test_separation_probability_examples() -> None:
    antipodal = separation_probability(EmbeddingMatrix(np.array([[1.0, -1.0]])))
    orthogonal = separation_probability(EmbeddingMatrix(np.eye(2)))
    assert antipodal[0, 1] == pytest.approx(1.0)
    assert orthogonal[0, 1] == pytest.approx(0.5)
    np.testing.assert_allclose(np.diag(antipodal), 0.0, atol=1e-7)


def test_expected_cut_examples(triangle_weights: WeightMatrix) -> None:
    assert expected_cut(EmbeddingMatrix(np.array([[1.0, -1.0]])), EDGE) == pytest.approx(1.0)
    assert expected_cut(triangle_embedding(), triangle_weights) == pytest.approx(2.0)


@pytest.mark.parametrize("seed", range(5))
def test_expected_cut_meets_alpha_guarantee(seed: int) -> None:
    weights = random_weight_matrix(10, seed)
    embedding = solve_relaxation(weights, SolverConfig(seed=seed))
    bound = alpha_constant() * relaxed_objective(weights, embedding)
    assert expected_cut(embedding, weights) >= bound - 1e-9


@pytest.mark.slow
def test_sampled_cuts_average_to_the_expectation() -> None:
    weights = random_weight_matrix(10, 11)
    embedding = solve_relaxation(weights, SolverConfig(seed=11))
    cuts = np.array(
        [
            round_once(embedding, weights, sample_hyperplane_normal(embedding.ambient_dim, rng)).cut_value
            for rng in trial_generators(5, 4000)
        ]
    )
    standard_error = cuts.std(ddof=1) / math.sqrt(cuts.size)
    assert abs(cuts.mean() - expected_cut(embedding, weights)) <= 5.0 * standard_error



@pytest.mark.parametrize("seed", range(50))
def test_expected_cut_meets_alpha_bound_for_any_embedding(seed: int) -> None:
    size = 4 + seed % 9
    weights = random_weight_matrix(size, seed)
    embedding = random_embedding(1 + seed % 6, size, 500 + seed)
    bound = alpha_constant() * relaxed_objective(weights, embedding)
    assert expected_cut(embedding, weights) >= bound - 1e-12


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(10))
def test_monte_carlo_cut_matches_closed_form(seed: int) -> None:
    weights = random_weight_matrix(8, seed)
    embedding = random_embedding(8, 8, 100 + seed)
    normals = np.random.default_rng(seed).standard_normal((100_000, 8))
    signs = np.where(normals @ embedding.columns >= 0.0, 1.0, -1.0)
    quadratic = np.einsum("ti,ij,tj->t", signs, weights.entries, signs)
    cuts = 0.25 * (weights.entries.sum() - quadratic)
    standard_error = cuts.std(ddof=1) / math.sqrt(cuts.size)
    # 3.5 standard errors per embedding keeps the joint false-failure rate over ten below 1%.
    assert abs(cuts.mean() - expected_cut(embedding, weights)) <= 3.5 * standard_error

def test_round_best_report_is_consistent() -> None:
    weights = random_weight_matrix(12, 4)
    embedding = solve_relaxation(weights, SolverConfig(seed=4))
    report = round_best(embedding, weights, 50, 9)
    assert report.trials == 50
    assert report.seed == 9
    assert report.best.cut_value >= report.sampled_mean_cut - 1e-9
    assert 0.0 <= report.ratio_to_relaxation <= 1.0
    assert report.best.cut_value == pytest.approx(cut_value(weights, report.best.signs))
    assert report.raw_mean_cut is None


def test_round_best_ignores_thread_count() -> None:
    weights = random_weight_matrix(12, 6)
    embedding = solve_relaxation(weights, SolverConfig(seed=6))
    serial = round_best(embedding, weights, 40, 1)
    threaded = round_best(embedding, weights, 40, 1, threads=4)
    assert serial == threaded


def test_round_best_clamps_ratio_for_non_optimal_embedding(caplog: pytest.LogCaptureFixture) -> None:
    with caplog.at_level(logging.WARNING, logger="gwcluster.rounding"):
        report = round_best(EmbeddingMatrix(np.eye(2)), EDGE, 100, 0)
    assert report.best.cut_value == 1.0
    assert report.relaxed_objective == pytest.approx(0.5)
    assert report.ratio_to_relaxation == 1.0
    assert "exceeds the relaxed objective" in caplog.text


def test_round_best_on_zero_weights() -> None:
    weights = WeightMatrix(np.zeros((3, 3)))
    report = round_best(triangle_embedding(), weights, 5, 0)
    assert report.best.cut_value == 0.0
    assert report.ratio_to_relaxation == 0.0


def test_round_best_requires_a_trial(triangle_weights: WeightMatrix) -> None:
    with pytest.raises(InputValidationError):
        round_best(triangle_embedding(), triangle_weights, 0, 0)


def test_baseline_on_two_points_always_cuts() -> None:
    points = PointSet(np.array([[0.0, 0.0], [3.0, 4.0]]))
    weights = build_weight_matrix(points)
    assert round_points_baseline(points, weights, 20, 3) == pytest.approx(5.0)


def test_round_best_with_points_reports_baseline() -> None:
    points = PointSet(np.random.default_rng(1).normal(size=(8, 3)))
    weights = build_weight_matrix(points)
    embedding = solve_relaxation(weights, SolverConfig(seed=1))
    report = round_best(embedding, weights, 30, 2, points=points)
    assert report.raw_mean_cut == pytest.approx(round_points_baseline(points, weights, 30, 2))


def test_report_rejects_best_below_mean() -> None:
    with pytest.raises(ValidationError):
        RoundingReport(
            best=CutPartition(signs=(1, -1), cut_value=0.5),
            trials=2,
            sampled_mean_cut=1.0,
            closed_form_expected_cut=1.0,
            relaxed_objective=1.0,
            ratio_to_relaxation=0.5,
            seed=0,
        )


def test_hyperplane_angles_are_uniform() -> None:
    rng = np.random.default_rng(0)
    normals = np.array([sample_hyperplane_normal(2, rng) for _ in range(10_000)])
    angles = np.mod(np.arctan2(normals[:, 1], normals[:, 0]), 2.0 * math.pi)
    counts, _ = np.histogram(angles, bins=20, range=(0.0, 2.0 * math.pi))
    assert stats.chisquare(counts).pvalue > 0.01


@pytest.mark.parametrize("seed", range(50))
def test_rounding_is_sandwiched_by_exact_and_relaxed_values(seed: int) -> None:
    size = 6 + seed % 11
    weights = random_weight_matrix(size, 1000 + seed)
    embedding = solve_relaxation(weights, SolverConfig(seed=seed))
    relaxed = relaxed_objective(weights, embedding)
    exact = brute_force_maxcut(weights).value
    report = round_best(embedding, weights, 200, seed)
    assert report.best.cut_value <= exact + 1e-9
    assert exact <= relaxed + 1e-6
    assert expected_cut(embedding, weights) >= alpha_constant() * relaxed - 1e-9
    assert report.best.cut_value >= alpha_constant() * relaxed - 1e-9
