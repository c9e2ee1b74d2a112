"""Cluster-coloured scatter plots of principal coordinates, written as SVG."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be chosen first)
import numpy as np  # noqa: E402

from .errors import InputValidationError  # noqa: E402

logger = logging.getLogger(__name__)

CLUSTER_COLOURS = {1: "#1f77b4", -1: "#d62728"}
CLUSTER_NAMES = {1: "cluster A", -1: "cluster B"}

# Fixed salt and no date keep the SVG byte-identical across runs.
_SVG_RC = {"svg.hashsalt": "gwcluster", "svg.fonttype": "none"}


def write_scatter_svg(
    path: Path,
    coords: np.ndarray,
    signs: Sequence[int],
    *,
    title: str = "",
) -> Path:
    """Scatter 2-D or 3-D coordinates coloured by cluster; axes name the PCA components."""

    coords = np.asarray(coords, dtype=float)
    signs = np.asarray(signs)
    dim = coords.shape[1]
    if dim not in (2, 3):
        raise InputValidationError(f"Scatter plots need 2 or 3 coordinates, got {dim}.")

    with plt.rc_context(_SVG_RC):
        figure = plt.figure(figsize=(6, 5))
        axes = figure.add_subplot(projection="3d" if dim == 3 else None)
        for side in (1, -1):
            members = coords[signs == side]
            if not members.size:
                continue
            axes.scatter(
                *members.T,
                s=14,
                color=CLUSTER_COLOURS[side],
                label=f"{CLUSTER_NAMES[side]} ({len(members)})",
            )
        axes.set_xlabel("PC 1")
        axes.set_ylabel("PC 2")
        if dim == 3:
            axes.set_zlabel("PC 3")
        if title:
            axes.set_title(title)
        axes.legend(loc="best")
        figure.savefig(path, format="svg", metadata={"Date": None})
        plt.close(figure)

    logger.debug("Wrote scatter plot %s", path)
    return Path(path)


__all__ = ["write_scatter_svg"]
