"""Exception hierarchy shared by the clustering pipeline and the CLI."""

from __future__ import annotations

from typing import Optional, Tuple


class GWClusterError(RuntimeError):
    """Base class for every error raised by the package."""


class InputValidationError(GWClusterError, ValueError):
    """Raised when user supplied data or parameters are malformed.

    ``index_pair`` names the offending matrix entry when the problem is entry specific and
    ``location`` names the file (and row) when the data came from disk.
    """

    def __init__(
        self,
        message: str,
        *,
        index_pair: Optional[Tuple[int, int]] = None,
        location: Optional[str] = None,
    ) -> None:
        if location:
            message = f"{location}: {message}"
        super().__init__(message)
        self.index_pair = index_pair
        self.location = location


class CapacityError(InputValidationError):
    """Raised when an exact computation is requested beyond its size cap."""


class ConfigValidationError(InputValidationError):
    """Raised when the runtime configuration or a ``--config`` file is invalid."""


class NumericError(GWClusterError, ArithmeticError):
    """Raised when a numeric routine meets an input it cannot factor or evaluate."""


__all__ = [
    "CapacityError",
    "ConfigValidationError",
    "GWClusterError",
    "InputValidationError",
    "NumericError",
]
