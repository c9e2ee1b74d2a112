"""Runtime settings resolved from the environment and optional JSON config files."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import ConfigValidationError

load_dotenv()

ENV_SEED = "GWCLUSTER_SEED"
ENV_THREADS = "GWCLUSTER_THREADS"
ENV_OUT_DIR = "GWCLUSTER_OUT_DIR"
ENV_LOG_LEVEL = "GWCLUSTER_LOG_LEVEL"

DEFAULT_SEED = 0
DEFAULT_THREADS = 1
DEFAULT_OUT_DIR = "runs"
DEFAULT_LOG_LEVEL = "INFO"
DEFAULT_TRIALS = 100
DEFAULT_WINDOW = 10

LOG_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}


@dataclass(frozen=True)
class RuntimeSettings:
    """Defaults shared by every subcommand before flags are applied."""

    seed: int
    threads: int
    out_dir: Path
    log_level: str


def _env_int(name: str, default: int, *, minimum: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = int(raw.strip())
    except ValueError as exc:
        raise ConfigValidationError(f"{name} must be an integer, got '{raw}'.") from exc
    if value < minimum:
        raise ConfigValidationError(f"{name} must be >= {minimum}, got {value}.")
    return value


def load_settings() -> RuntimeSettings:
    """Resolve runtime defaults from ``GWCLUSTER_*`` environment variables."""

    seed = _env_int(ENV_SEED, DEFAULT_SEED, minimum=0)
    threads = _env_int(ENV_THREADS, DEFAULT_THREADS, minimum=1)
    out_dir = Path((os.getenv(ENV_OUT_DIR) or DEFAULT_OUT_DIR).strip() or DEFAULT_OUT_DIR)

    log_level = (os.getenv(ENV_LOG_LEVEL) or DEFAULT_LOG_LEVEL).strip().upper()
    if log_level not in LOG_LEVELS:
        raise ConfigValidationError(
            f"Unsupported log level '{log_level}'. Use one of {', '.join(sorted(LOG_LEVELS))}."
        )

    return RuntimeSettings(seed=seed, threads=threads, out_dir=out_dir, log_level=log_level)


class ConfigFile(BaseModel):
    """Schema of a ``--config`` JSON file; every key mirrors a command-line flag."""

    model_config = ConfigDict(extra="forbid")

    seed: Optional[int] = Field(default=None, ge=0)
    trials: Optional[int] = Field(default=None, ge=1)
    threads: Optional[int] = Field(default=None, ge=1)
    out_dir: Optional[str] = None
    log_level: Optional[str] = None
    metric: Optional[str] = None
    header: Optional[bool] = None
    rank: Optional[int] = Field(default=None, ge=1)
    max_sweeps: Optional[int] = Field(default=None, ge=1)
    objective_tol: Optional[float] = Field(default=None, gt=0)
    iterations: Optional[int] = Field(default=None, ge=1, le=5)
    pca_dim: Optional[int] = Field(default=None, ge=2, le=3)
    pad_to: Optional[int] = Field(default=None, ge=2)
    recurse_on: Optional[str] = None
    count: Optional[int] = Field(default=None, ge=2)
    noise: Optional[float] = Field(default=None, ge=0)
    edge: Optional[float] = Field(default=None, gt=0)
    separation: Optional[float] = Field(default=None, gt=0)
    window: Optional[int] = Field(default=None, ge=2)
    targets: Optional[str] = None
    lexicon_side_effects: Optional[str] = None
    lexicon_human: Optional[str] = None


def load_config_file(path: Path) -> Dict[str, Any]:
    """Read a JSON config file and return the flag defaults it declares.

    Keys may be spelled with dashes or underscores; unknown keys are rejected.
    """

    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigValidationError(f"Cannot read config file: {exc}", location=str(path)) from exc
    except json.JSONDecodeError as exc:
        raise ConfigValidationError(f"Invalid JSON ({exc.msg}) at line {exc.lineno}", location=str(path)) from exc
    except UnicodeDecodeError as exc:
        raise ConfigValidationError("Config file is not valid UTF-8.", location=str(path)) from exc

    if not isinstance(raw, dict):
        raise ConfigValidationError("Config file must contain a JSON object.", location=str(path))

    normalised = {str(key).replace("-", "_"): value for key, value in raw.items()}
    try:
        parsed = ConfigFile.model_validate(normalised)
    except ValidationError as exc:
        raise ConfigValidationError(str(exc), location=str(path)) from exc
    return parsed.model_dump(exclude_none=True)


__all__ = [
    "ConfigFile",
    "DEFAULT_TRIALS",
    "DEFAULT_WINDOW",
    "LOG_LEVELS",
    "RuntimeSettings",
    "load_config_file",
    "load_settings",
]
