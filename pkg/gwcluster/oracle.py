"""Exhaustive MaxCut for small instances, used as ground truth."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Tuple

import numpy as np

from .errors import CapacityError
from .models import ExactCutResult
from .rounding import make_partition
from .weights import WeightMatrix

logger = logging.getLogger(__name__)

MAX_EXACT_SIZE = 22
_CHUNK = 1 << 15
_TIE_RTOL = 1e-12


def _signs_for(codes: np.ndarray, size: int) -> np.ndarray:
    """Bit k of a code set means index k + 1 sits on the -1 side; index 0 is always +1."""

    bits = (codes[:, None] >> np.arange(size - 1)) & 1
    signs = np.ones((codes.size, size))
    signs[:, 1:] = 1.0 - 2.0 * bits
    return signs


def _best_in_chunk(entries: np.ndarray, start: int, stop: int, tolerance: float) -> Tuple[float, int]:
    codes = np.arange(start, stop, dtype=np.int64)
    signs = _signs_for(codes, entries.shape[0])
    quadratic = np.sum((signs @ entries) * signs, axis=1)
    values = 0.25 * (entries.sum() - quadratic)
    top = values.max()
    # First code within tolerance of the maximum, so float noise cannot reorder ties.
    index = int(np.flatnonzero(values >= top - tolerance)[0])
    return float(values[index]), int(codes[index])


def brute_force_maxcut(weights: WeightMatrix, *, threads: int = 1) -> ExactCutResult:
    """Enumerate every partition with index 0 fixed to +1 and return a maximiser.

    Ties go to the smallest code. The result is the same for every thread count.
    """

    size = weights.size
    if size > MAX_EXACT_SIZE:
        raise CapacityError(
            f"Exact MaxCut is capped at {MAX_EXACT_SIZE} indices; got {size}."
        )

    total = 1 << (size - 1)
    entries = weights.entries
    tolerance = _TIE_RTOL * max(weights.total_weight, 1.0)
    bounds: List[Tuple[int, int]] = [
        (start, min(start + _CHUNK, total)) for start in range(0, total, _CHUNK)
    ]

    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda b: _best_in_chunk(entries, b[0], b[1], tolerance), bounds))
    else:
        results = [_best_in_chunk(entries, start, stop, tolerance) for start, stop in bounds]

    best_value, best_code = results[0]
    for value, code in results[1:]:
        if value > best_value + tolerance:
            best_value, best_code = value, code

    signs = _signs_for(np.array([best_code], dtype=np.int64), size)[0].astype(int)
    partition = make_partition(weights, signs)
    logger.info("Exact MaxCut over %d partitions: %.10g.", total, partition.cut_value)
    return ExactCutResult(partition=partition, value=partition.cut_value, enumerated=total)


__all__ = ["MAX_EXACT_SIZE", "brute_force_maxcut"]
