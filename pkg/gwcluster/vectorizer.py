"""Conditional-probability vectors of articles around an anchor token."""

from __future__ import annotations

import logging
import re
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .errors import InputValidationError
from .models import ArticleVector, Lexicons, TargetList
from .weights import PointSet

logger = logging.getLogger(__name__)

# Internal hyphens stay inside a token so "side-effect" survives a second pass.
_TOKEN_RE = re.compile(r"[^\W_]+(?:-[^\W_]+)*")


def tokenize(text: str) -> List[str]:
    """Lowercase and split on whitespace and punctuation."""

    return _TOKEN_RE.findall(text.lower())


def _phrase_table(lexicons: Lexicons) -> Tuple[Dict[Tuple[str, ...], str], int]:
    table: Dict[Tuple[str, ...], str] = {}
    for phrase, canonical in lexicons.canonical_map().items():
        key = tuple(tokenize(phrase))
        if key:
            table[key] = canonical
    longest = max((len(key) for key in table), default=0)
    return table, longest


def preprocess(text: str, lexicons: Lexicons) -> List[str]:
    """Tokenise ``text`` and collapse lexicon phrases into their canonical token.

    Matching is greedy left to right and prefers the longest phrase starting at a position.
    """

    tokens = tokenize(text)
    table, longest = _phrase_table(lexicons)
    if not table:
        return tokens

    output: List[str] = []
    position = 0
    while position < len(tokens):
        for length in range(min(longest, len(tokens) - position), 0, -1):
            canonical = table.get(tuple(tokens[position : position + length]))
            if canonical is not None:
                output.append(canonical)
                position += length
                break
        else:
            output.append(tokens[position])
            position += 1
    return output


def _check_window(window: int) -> int:
    if window < 2 or window % 2:
        raise InputValidationError(f"Window size must be an even number >= 2, got {window}.")
    return window // 2


def vectorize_article(
    tokens: Sequence[str],
    targets: TargetList,
    window: int,
    article_id: str = "",
) -> ArticleVector:
    """Score each context token by the share of anchor windows that contain it.

    A window holds ``window / 2`` tokens on each side of an anchor occurrence, clipped at the
    sequence ends. Windows of neighbouring occurrences may overlap.
    """

    half = _check_window(window)
    positions = [index for index, token in enumerate(tokens) if token == targets.anchor]
    hits = dict.fromkeys(targets.contexts, 0)

    for position in positions:
        nearby = set(tokens[max(0, position - half) : position])
        nearby.update(tokens[position + 1 : position + half + 1])
        for context in targets.contexts:
            if context in nearby:
                hits[context] += 1

    occurrences = len(positions)
    probs = tuple(
        hits[context] / occurrences if occurrences else 0.0 for context in targets.contexts
    )
    return ArticleVector(article_id=article_id, probs=probs, anchor_occurrences=occurrences)


def vectorize_corpus(
    documents: Sequence[Tuple[str, str]],
    targets: TargetList,
    lexicons: Lexicons,
    window: int,
    *,
    threads: int = 1,
) -> Tuple[PointSet, List[ArticleVector]]:
    """Vectorise every ``(id, text)`` document, preserving order."""

    if not documents:
        raise InputValidationError("The corpus is empty.")
    _check_window(window)

    seen = set()
    for article_id, _ in documents:
        if article_id in seen:
            raise InputValidationError(f"Duplicate article id '{article_id}'.")
        seen.add(article_id)

    def _one(document: Tuple[str, str]) -> ArticleVector:
        article_id, text = document
        return vectorize_article(preprocess(text, lexicons), targets, window, article_id)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            vectors = list(pool.map(_one, documents))
    else:
        vectors = [_one(document) for document in documents]

    without_anchor = sum(1 for vector in vectors if vector.anchor_occurrences == 0)
    if without_anchor:
        logger.info("%d of %d articles never mention '%s'.", without_anchor, len(vectors), targets.anchor)

    points = PointSet(np.array([vector.probs for vector in vectors], dtype=float))
    return points, vectors


__all__ = ["preprocess", "tokenize", "vectorize_article", "vectorize_corpus"]
