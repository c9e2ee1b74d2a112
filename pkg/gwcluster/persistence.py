"""Readers and writers for every on-disk format the CLI consumes or emits."""

from __future__ import annotations

import csv
import json
import logging
from importlib import resources
from pathlib import Path
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel

from .errors import InputValidationError
from .models import ArticleVector, CutPartition, Lexicons, RelaxationReport, TargetList
from .relaxation import EmbeddingMatrix
from .weights import PointSet, WeightMatrix, validate_weights

logger = logging.getLogger(__name__)

_DATA_PACKAGE = "gwcluster.data"
BUNDLED_CORPUS = "toy_corpus.jsonl"
BUNDLED_SIDE_EFFECTS = "side_effects.txt"
BUNDLED_HUMAN_TERMS = "human_terms.txt"


def bundled_path(name: str) -> Path:
    """Filesystem path of a file shipped in ``gwcluster/data``."""

    return Path(str(resources.files(_DATA_PACKAGE).joinpath(name)))


def _format_float(value: float) -> str:
    return "%.17g" % value


def _read_text(path: Path) -> str:
    """Whole file as UTF-8 text; undecodable bytes are reported with their row."""

    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise InputValidationError(f"cannot read file ({exc.strerror})", location=str(path)) from exc
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        row = data.count(b"\n", 0, exc.start) + 1
        raise InputValidationError("not valid UTF-8", location=f"{path}, row {row}") from exc


def _read_rows(path: Path, *, skip_header: bool = False) -> List[Tuple[int, List[float]]]:
    rows: List[Tuple[int, List[float]]] = []
    lines = _read_text(path).splitlines()
    for line_number, row in enumerate(csv.reader(lines), start=1):
        if skip_header and line_number == 1:
            continue
        if not row or all(not cell.strip() for cell in row):
            continue
        try:
            rows.append((line_number, [float(cell) for cell in row]))
        except ValueError as exc:
            raise InputValidationError(
                f"non-numeric value ({exc})", location=f"{path}, row {line_number}"
            ) from exc
    if not rows:
        raise InputValidationError("file holds no data rows", location=str(path))
    return rows


def read_points_csv(path: Path, *, header: bool = False) -> PointSet:
    """One point per row, comma separated; ``header`` skips the first row."""

    rows = _read_rows(path, skip_header=header)
    dim = len(rows[0][1])
    for line_number, values in rows:
        if len(values) != dim:
            raise InputValidationError(
                f"expected {dim} coordinates, found {len(values)}",
                location=f"{path}, row {line_number}",
            )
    return PointSet(np.array([values for _, values in rows]))


def read_matrix_csv(path: Path) -> WeightMatrix:
    """n rows of n comma-separated weights, validated as a dissimilarity matrix."""

    rows = _read_rows(path)
    size = len(rows)
    for line_number, values in rows:
        if len(values) != size:
            raise InputValidationError(
                f"expected {size} entries for a square matrix, found {len(values)}",
                location=f"{path}, row {line_number}",
            )
    try:
        return validate_weights(np.array([values for _, values in rows]))
    except InputValidationError as exc:
        raise InputValidationError(str(exc), index_pair=exc.index_pair, location=str(path)) from exc


def read_labels_csv(path: Path) -> np.ndarray:
    """Labels written by :func:`write_labels_csv` (header ``index,label``)."""

    rows = _read_rows(path, skip_header=True)
    return np.array([int(values[-1]) for _, values in rows])


def write_points_csv(path: Path, points: PointSet) -> Path:
    with Path(path).open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        for row in points.points:
            writer.writerow([_format_float(value) for value in row])
    return Path(path)


def write_labels_csv(path: Path, labels: Sequence[int]) -> Path:
    with Path(path).open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["index", "label"])
        for index, label in enumerate(labels):
            writer.writerow([index, int(label)])
    return Path(path)


def write_partition_csv(path: Path, partition: CutPartition) -> Path:
    """Columns ``index,sign,cluster``; cluster A holds the +1 side."""

    with Path(path).open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["index", "sign", "cluster"])
        for index, sign in enumerate(partition.signs):
            writer.writerow([index, sign, "A" if sign == 1 else "B"])
    return Path(path)


def write_json(path: Path, payload: Any) -> Path:
    """Write a model or plain mapping as sorted, indented JSON."""

    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json")
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.debug("Wrote %s", path)
    return Path(path)


def write_embedding(
    path: Path, embedding: EmbeddingMatrix, report: RelaxationReport
) -> Tuple[Path, Path]:
    """One column vector per CSV row plus a JSON sidecar describing the solve."""

    csv_path = Path(path)
    with csv_path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        for column in embedding.columns.T:
            writer.writerow([_format_float(value) for value in column])
    sidecar = csv_path.with_suffix(".json")
    write_json(
        sidecar,
        report.model_dump(
            mode="json",
            include={"ambient_dim", "count", "objective", "converged", "sweeps"},
        ),
    )
    return csv_path, sidecar


def read_lexicon(path: Path) -> frozenset[str]:
    """UTF-8 phrases, one per line; blank lines and ``#`` comments are ignored."""

    lines = _read_text(path).splitlines()
    phrases = set()
    for line in lines:
        phrase = " ".join(line.split("#", 1)[0].split()).lower()
        if phrase:
            phrases.add(phrase)
    return frozenset(phrases)


def load_lexicons(
    side_effects: Optional[Path] = None, human_terms: Optional[Path] = None
) -> Lexicons:
    """Load lexicon files, falling back to the bundled demo lists."""

    side_effects = side_effects or bundled_path(BUNDLED_SIDE_EFFECTS)
    human_terms = human_terms or bundled_path(BUNDLED_HUMAN_TERMS)
    try:
        return Lexicons(
            side_effect_terms=read_lexicon(side_effects), human_terms=read_lexicon(human_terms)
        )
    except InputValidationError:
        raise
    except ValueError as exc:
        raise InputValidationError(str(exc)) from exc


def _label(value: Any, location: str) -> int:
    try:
        label = int(value)
    except (TypeError, ValueError) as exc:
        raise InputValidationError(f"label must be 0 or 1, got {value!r}", location=location) from exc
    if label not in (0, 1):
        raise InputValidationError(f"label must be 0 or 1, got {value!r}", location=location)
    return label


def load_corpus(path: Path) -> Tuple[List[Tuple[str, str]], Optional[np.ndarray]]:
    """Read ``(id, text)`` documents and optional 0/1 labels.

    A directory yields one document per ``.txt`` file (id = file stem, sorted by name); any
    other path is read as JSON lines with ``id``, ``text`` and optional ``label`` keys.
    """

    path = Path(path)
    if path.is_dir():
        files = sorted(path.glob("*.txt"))
        if not files:
            raise InputValidationError("directory has no .txt documents", location=str(path))
        return [(file.stem, _read_text(file)) for file in files], None

    documents: List[Tuple[str, str]] = []
    labels: List[int] = []
    lines = _read_text(path).split("\n")
    for line_number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            documents.append((str(record["id"]), str(record["text"])))
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise InputValidationError(
                f"expected a JSON object with id and text ({exc})",
                location=f"{path}, row {line_number}",
            ) from exc
        if "label" in record:
            labels.append(_label(record["label"], f"{path}, row {line_number}"))
    complete = labels and len(labels) == len(documents)
    return documents, (np.array(labels) if complete else None)


def write_vectors_csv(path: Path, vectors: Sequence[ArticleVector], targets: TargetList) -> Path:
    """Header ``id,<p_context...>,anchor_count``; probabilities to six decimals."""

    with Path(path).open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["id", *targets.column_names(), "anchor_count"])
        for vector in vectors:
            writer.writerow(
                [vector.article_id, *(f"{prob:.6f}" for prob in vector.probs), vector.anchor_occurrences]
            )
    return Path(path)


__all__ = [
    "BUNDLED_CORPUS",
    "bundled_path",
    "load_corpus",
    "load_lexicons",
    "read_labels_csv",
    "read_lexicon",
    "read_matrix_csv",
    "read_points_csv",
    "write_embedding",
    "write_json",
    "write_labels_csv",
    "write_partition_csv",
    "write_points_csv",
    "write_vectors_csv",
]
