"""Pydantic models for configurations, reports and run manifests."""

from __future__ import annotations

import math
from enum import Enum
from typing import Dict, FrozenSet, List, Literal, Optional, Tuple

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationInfo,
    field_validator,
    model_validator,
)


class DistanceMetric(str, Enum):
    """Pairwise dissimilarity used to turn points into weights."""

    EUCLIDEAN = "euclidean"
    SQUARED_EUCLIDEAN = "squared_euclidean"


class RecurseOn(str, Enum):
    """What the next recursion step consumes from the previous embedding."""

    PCA = "pca"
    RAW_EMBEDDING = "raw_embedding"


class SolverConfig(BaseModel):
    """Parameters of the low-rank coordinate descent relaxation solver."""

    model_config = ConfigDict(frozen=True)

    rank: Optional[int] = Field(
        default=None, ge=1, description="Rows of V; defaults to the number of columns."
    )
    max_sweeps: int = Field(default=500, ge=1)
    objective_tol: float = Field(
        default=1e-7, gt=0, description="Relative objective change per sweep that ends the solve."
    )
    stationarity_tol: float = Field(
        default=1e-6, gt=0, description="Largest column residual accepted at convergence."
    )
    seed: int = Field(default=0, ge=0)


class PipelineConfig(BaseModel):
    """Configuration of one GW pass and of the recursion built on it."""

    model_config = ConfigDict(frozen=True)

    iterations: int = Field(default=4, ge=1, le=5)
    pca_dim: Literal[2, 3] = 2
    pad_to: Optional[int] = Field(default=None, ge=2)
    trials: int = Field(default=100, ge=1)
    seed: int = Field(default=0, ge=0)
    threads: int = Field(default=1, ge=1)
    metric: DistanceMetric = DistanceMetric.EUCLIDEAN
    recurse_on: RecurseOn = RecurseOn.PCA
    solver: SolverConfig = Field(default_factory=SolverConfig)


class RelaxationReport(BaseModel):
    """Solver status stored next to an embedding."""

    ambient_dim: int = Field(..., ge=1)
    count: int = Field(..., ge=1)
    objective: float
    converged: bool
    sweeps: int = Field(..., ge=0)
    max_stationarity_residual: float = Field(..., ge=0)
    objective_history: List[float] = Field(default_factory=list)


class CutPartition(BaseModel):
    """Sign assignment y with its cut value; ``signs[i] == 1`` places index i in cluster A."""

    model_config = ConfigDict(frozen=True)

    signs: Tuple[int, ...]
    cut_value: float = Field(..., ge=0)

    @field_validator("signs")
    @classmethod
    def _validate_signs(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:
        if any(sign not in (-1, 1) for sign in value):
            raise ValueError("Partition signs must be +1 or -1.")
        return value

    @property
    def size(self) -> int:
        return len(self.signs)

    def flipped(self) -> "CutPartition":
        return CutPartition(signs=tuple(-sign for sign in self.signs), cut_value=self.cut_value)


class RoundingReport(BaseModel):
    """Best hyperplane rounding over several trials plus the expectation statistics."""

    best: CutPartition
    trials: int = Field(..., ge=1)
    sampled_mean_cut: float
    closed_form_expected_cut: float
    relaxed_objective: float
    ratio_to_relaxation: float
    seed: int = Field(..., ge=0)
    raw_mean_cut: Optional[float] = Field(
        default=None, description="Mean cut of random hyperplanes through the raw points."
    )

    @model_validator(mode="after")
    def _validate_best_dominates_mean(self) -> "RoundingReport":
        if self.best.cut_value < self.sampled_mean_cut - 1e-9:
            raise ValueError("Best cut must be at least the sampled mean cut.")
        if not 0.0 <= self.ratio_to_relaxation <= 1.0 + 1e-9:
            raise ValueError("Ratio to the relaxation must lie in [0, 1].")
        return self


class ExactCutResult(BaseModel):
    """Exhaustive MaxCut optimum."""

    partition: CutPartition
    value: float = Field(..., ge=0)
    enumerated: int = Field(..., ge=1)


class ClusterQuality(BaseModel):
    """Tightness of a two-cluster split of low-dimensional coordinates."""

    within_cluster_variance: float = Field(..., ge=0)
    between_centroid_distance: float = Field(..., ge=0)
    separation_ratio: float = Field(..., ge=0)

    @field_validator("*")
    @classmethod
    def _finite(cls, value: float, info: ValidationInfo) -> float:
        if not math.isfinite(value):
            raise ValueError(f"{info.field_name} must be finite")
        return value


class TargetList(BaseModel):
    """Anchor token plus the ordered context tokens scored around it."""

    model_config = ConfigDict(frozen=True)

    anchor: str = "amodiaquine"
    contexts: Tuple[str, ...] = ("human", "side-effect")

    @field_validator("anchor")
    @classmethod
    def _validate_anchor(cls, value: str) -> str:
        if not value or value != value.lower() or value.strip() != value:
            raise ValueError("Anchor must be a nonempty lowercase token.")
        return value

    @field_validator("contexts")
    @classmethod
    def _validate_contexts(cls, value: Tuple[str, ...], info: ValidationInfo) -> Tuple[str, ...]:
        if not value:
            raise ValueError("At least one context token is required.")
        if any(not token or token != token.lower() or token.strip() != token for token in value):
            raise ValueError("Context tokens must be nonempty lowercase tokens.")
        if len(set(value)) != len(value):
            raise ValueError("Context tokens must be unique.")
        if info.data.get("anchor") in value:
            raise ValueError("The anchor cannot also be a context token.")
        return value

    @classmethod
    def parse(cls, text: str) -> "TargetList":
        """Build from ``anchor,context1,context2,...``."""

        tokens = [token.strip().lower() for token in text.split(",") if token.strip()]
        if len(tokens) < 2:
            raise ValueError("Targets need an anchor and at least one context token.")
        return cls(anchor=tokens[0], contexts=tuple(tokens[1:]))

    def column_names(self) -> List[str]:
        return [f"p_{token.replace('-', '_')}" for token in self.contexts]


class Lexicons(BaseModel):
    """Phrase lists that are collapsed into canonical context tokens."""

    model_config = ConfigDict(frozen=True)

    side_effect_terms: FrozenSet[str] = frozenset()
    human_terms: FrozenSet[str] = frozenset()

    @field_validator("side_effect_terms", "human_terms")
    @classmethod
    def _lowercase(cls, value: FrozenSet[str]) -> FrozenSet[str]:
        if any(phrase != phrase.lower() or not phrase.strip() for phrase in value):
            raise ValueError("Lexicon phrases must be nonempty and lowercase.")
        return value

    @model_validator(mode="after")
    def _disjoint(self) -> "Lexicons":
        overlap = self.side_effect_terms & self.human_terms
        if overlap:
            raise ValueError(f"Lexicons overlap on: {', '.join(sorted(overlap))}")
        return self

    def canonical_map(self) -> Dict[str, str]:
        mapping = {phrase: "side-effect" for phrase in self.side_effect_terms}
        mapping.update({phrase: "human" for phrase in self.human_terms})
        return mapping


class ArticleVector(BaseModel):
    """Per-article conditional probabilities aligned with ``TargetList.contexts``."""

    article_id: str
    probs: Tuple[float, ...]
    anchor_occurrences: int = Field(..., ge=0)

    @model_validator(mode="after")
    def _validate_probs(self) -> "ArticleVector":
        if any(not 0.0 <= prob <= 1.0 for prob in self.probs):
            raise ValueError("Probabilities must lie in [0, 1].")
        if self.anchor_occurrences == 0 and any(self.probs):
            raise ValueError("Articles without the anchor must map to the origin.")
        return self


class RunManifest(BaseModel):
    """Record of one CLI invocation written as ``manifest.json``."""

    command: str
    config: Dict[str, object]
    seed: int = Field(..., ge=0)
    artifacts: List[str] = Field(default_factory=list)
    timings: Dict[str, float] = Field(default_factory=dict)


__all__ = [
    "ArticleVector",
    "ClusterQuality",
    "CutPartition",
    "DistanceMetric",
    "ExactCutResult",
    "Lexicons",
    "PipelineConfig",
    "RecurseOn",
    "RelaxationReport",
    "RoundingReport",
    "RunManifest",
    "SolverConfig",
    "TargetList",
]
