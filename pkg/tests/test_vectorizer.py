"""Tokenisation, lexicon collapsing and conditional-probability vectors."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from gwcluster.errors import InputValidationError
from gwcluster.models import ArticleVector, Lexicons, TargetList
from gwcluster.persistence import BUNDLED_CORPUS, bundled_path, load_corpus, load_lexicons, write_vectors_csv
from gwcluster.vectorizer import preprocess, tokenize, vectorize_article, vectorize_corpus

TARGETS = TargetList()
LEXICONS = Lexicons(
    side_effect_terms=frozenset({"headache", "nausea", "nausea and vomiting", "vomiting"}),
    human_terms=frozenset({"patient", "patients"}),
)


def test_tokenize_lowercases_and_strips_punctuation() -> None:
    assert tokenize("Amodiaquine, (tested) in Mice!") == ["amodiaquine", "tested", "in", "mice"]
    assert tokenize("a side-effect_free run") == ["a", "side-effect", "free", "run"]


def test_headache_becomes_side_effect() -> None:
    lexicons = Lexicons(side_effect_terms=frozenset({"headache"}))
    assert preprocess("Headache was reported.", lexicons) == ["side-effect", "was", "reported"]


def test_empty_text_gives_no_tokens() -> None:
    assert preprocess("", LEXICONS) == []


def test_longest_phrase_wins() -> None:
    tokens = preprocess("the patient felt nausea and vomiting", LEXICONS)
    assert tokens == ["the", "human", "felt", "side-effect"]


@pytest.mark.parametrize(
    "text",
    [
        "Patients reported headache, nausea and vomiting after amodiaquine.",
        "Side-effect free; patient-reported outcomes in human subjects.",
        "",
    ],
)
def test_preprocess_is_idempotent(text: str) -> None:
    once = preprocess(text, LEXICONS)
    assert preprocess(" ".join(once), LEXICONS) == once


def test_article_without_anchor_is_at_origin() -> None:
    vector = vectorize_article(["no", "anchor", "here", "human"], TARGETS, 10)
    assert vector.probs == (0.0, 0.0)
    assert vector.anchor_occurrences == 0


def test_single_anchor_sees_both_contexts() -> None:
    tokens = ["amodiaquine", "causes", "side-effect", "in", "human"]
    assert vectorize_article(tokens, TARGETS, 10).probs == (1.0, 1.0)


def test_two_occurrences_average_their_windows() -> None:
    tokens = ["amodiaquine", "in", "human"] + ["filler"] * 12 + ["amodiaquine", "alone"]
    vector = vectorize_article(tokens, TARGETS, 10)
    assert vector.anchor_occurrences == 2
    assert vector.probs == (0.5, 0.0)


def test_window_excludes_tokens_beyond_half_width() -> None:
    tokens = ["amodiaquine", "a", "b", "c", "d", "human", "side-effect"]
    assert vectorize_article(tokens, TARGETS, 10).probs == (1.0, 0.0)
    assert vectorize_article(tokens, TARGETS, 8).probs == (0.0, 0.0)


def test_overlapping_windows_are_scored_independently() -> None:
    tokens = ["human", "amodiaquine", "x", "amodiaquine"]
    assert vectorize_article(tokens, TARGETS, 2).probs == (0.5, 0.0)
    assert vectorize_article(tokens, TARGETS, 6).probs == (1.0, 0.0)


@pytest.mark.parametrize("window", [0, 3, 11])
def test_odd_or_small_window_is_rejected(window: int) -> None:
    with pytest.raises(InputValidationError):
        vectorize_article(["amodiaquine"], TARGETS, window)


def test_anchor_free_padding_changes_nothing() -> None:
    text = "Patients given amodiaquine reported headache."
    padding = " ".join(["filler"] * 20)
    base = vectorize_article(preprocess(text, LEXICONS), TARGETS, 10)
    padded = vectorize_article(preprocess(f"{padding} {text} {padding}", LEXICONS), TARGETS, 10)
    assert padded.probs == base.probs


def test_probabilities_are_occurrence_fractions() -> None:
    documents, _ = load_corpus(bundled_path(BUNDLED_CORPUS))
    _, vectors = vectorize_corpus(documents, TARGETS, load_lexicons(), 10)
    for vector in vectors:
        scaled = np.array(vector.probs) * vector.anchor_occurrences
        np.testing.assert_allclose(scaled, np.round(scaled), atol=1e-12)


def test_single_document_corpus() -> None:
    points, vectors = vectorize_corpus([("one", "amodiaquine in patients")], TARGETS, LEXICONS, 10)
    assert points.points.shape == (1, 2)
    assert vectors[0].article_id == "one"
    assert vectors[0].probs == (1.0, 0.0)


def test_custom_targets_set_the_dimension() -> None:
    targets = TargetList.parse("amodiaquine,human,side-effect,plasma")
    points, _ = vectorize_corpus([("a", "amodiaquine plasma")], targets, LEXICONS, 4)
    assert points.dim == 3
    assert targets.column_names() == ["p_human", "p_side_effect", "p_plasma"]


def test_duplicate_ids_are_rejected() -> None:
    with pytest.raises(InputValidationError):
        vectorize_corpus([("a", "x"), ("a", "y")], TARGETS, LEXICONS, 10)


def test_empty_corpus_is_rejected() -> None:
    with pytest.raises(InputValidationError):
        vectorize_corpus([], TARGETS, LEXICONS, 10)


def test_anchor_free_corpus_maps_to_origin() -> None:
    points, _ = vectorize_corpus([("a", "nothing"), ("b", "still nothing")], TARGETS, LEXICONS, 10)
    np.testing.assert_array_equal(points.points, np.zeros((2, 2)))


def test_threads_preserve_order() -> None:
    documents, _ = load_corpus(bundled_path(BUNDLED_CORPUS))
    lexicons = load_lexicons()
    serial, _ = vectorize_corpus(documents, TARGETS, lexicons, 10)
    threaded, _ = vectorize_corpus(documents, TARGETS, lexicons, 10, threads=4)
    np.testing.assert_array_equal(serial.points, threaded.points)


def test_toy_corpus_matches_golden_file(tmp_path: Path, fixtures_dir: Path) -> None:
    documents, labels = load_corpus(bundled_path(BUNDLED_CORPUS))
    _, vectors = vectorize_corpus(documents, TARGETS, load_lexicons(), 10)
    output = write_vectors_csv(tmp_path / "vectors.csv", vectors, TARGETS)
    assert output.read_bytes() == (fixtures_dir / "toy_vectors_w10.csv").read_bytes()
    assert labels is not None and len(labels) == 12
    for vector in vectors:
        if vector.anchor_occurrences == 0:
            assert vector.probs == (0.0, 0.0)


def test_target_list_rejects_anchor_among_contexts() -> None:
    with pytest.raises(ValueError):
        TargetList(anchor="human", contexts=("human", "side-effect"))


def test_lexicons_must_be_disjoint() -> None:
    with pytest.raises(ValueError):
        Lexicons(side_effect_terms=frozenset({"rash"}), human_terms=frozenset({"rash"}))


def test_article_vector_without_anchor_must_be_zero() -> None:
    with pytest.raises(ValueError):
        ArticleVector(article_id="x", probs=(0.5, 0.0), anchor_occurrences=0)
