"""Goemans-Williamson MaxCut clustering with recursive and padded relaxations."""

from .oracle import brute_force_maxcut
from .pipeline import pca_project, run_gwa_once, run_recursive
from .relaxation import (
    EmbeddingMatrix,
    cholesky_embed,
    gram_matrix,
    pad_weights,
    relaxed_objective,
    solve_relaxation,
)
from .rounding import alpha_constant, expected_cut, round_best, round_once
from .vectorizer import preprocess, vectorize_article, vectorize_corpus
from .weights import PointSet, WeightMatrix, build_weight_matrix, validate_weights

__all__ = [
    "EmbeddingMatrix",
    "PointSet",
    "WeightMatrix",
    "alpha_constant",
    "brute_force_maxcut",
    "build_weight_matrix",
    "cholesky_embed",
    "expected_cut",
    "gram_matrix",
    "pad_weights",
    "pca_project",
    "preprocess",
    "relaxed_objective",
    "round_best",
    "round_once",
    "run_gwa_once",
    "run_recursive",
    "solve_relaxation",
    "validate_weights",
    "vectorize_article",
    "vectorize_corpus",
]
