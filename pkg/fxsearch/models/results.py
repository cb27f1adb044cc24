"""
Search budget, trial traces and estimation results.
"""

import math
from enum import Enum
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, model_validator

from fxsearch.exceptions import ArgumentError
from fxsearch.models.audio import AudioBuffer
from fxsearch.models.chain import ChainConfig


class SearchMode(str, Enum):
    """Division of work between the prediction and search stages."""

    DRY_TYPE_DIRECT = "direct"
    BYPASS_TYPE_ITER = "type-iter"
    BYPASS_CONFIG_ITER = "config-iter"

    @property
    def is_iterative(self) -> bool:
        return self is not SearchMode.DRY_TYPE_DIRECT

    @property
    def has_param_prediction(self) -> bool:
        return self is SearchMode.BYPASS_CONFIG_ITER


class SearchBudget(BaseModel):
    """
    Trial budget M = floor(m0 * d ** r).
    """

    model_config = ConfigDict(frozen=True)

    m0: int = Field(description="Base number of trials")
    d: int = Field(description="Search dimension")
    r: float = Field(default=1.5, description="Dimension exponent")

    @model_validator(mode="after")
    def check_positive(self) -> "SearchBudget":
        if self.m0 < 1 or self.d < 1:
            raise ArgumentError(
                "Budget requires m0 >= 1 and d >= 1", details={"m0": self.m0, "d": self.d}
            )
        return self

    def trials(self) -> int:
        """Total number of objective evaluations."""
        return budget_trials(self.m0, self.d, self.r)


def budget_trials(m0: int, d: int, r: float) -> int:
    """
    Compute floor(m0 * d ** r).

    Args:
        m0: Base number of trials (>= 1)
        d: Search dimension (>= 1)
        r: Exponent

    Returns:
        Number of trials, at least 1

    Raises:
        ArgumentError: If m0 or d is not positive
    """
    if m0 < 1 or d < 1:
        raise ArgumentError("budget_trials requires m0 >= 1 and d >= 1", details={"m0": m0, "d": d})
    # Guard against 5 * 3**1.5 style products landing a hair below an integer
    value = m0 * d**r
    trials = math.floor(value + 1e-9)
    return max(1, trials)


class TrialRecord(BaseModel):
    """One objective evaluation."""

    model_config = ConfigDict(frozen=True)

    index: int = Field(description="Trial index within its optimizer run")
    candidate: tuple[float, ...] = Field(description="Normalized candidate vector")
    score: float = Field(description="Objective value (higher is better)")
    stage: str = Field(default="", description="Search stage label, e.g. 'stage1:D>R'")


class EstimationResult(BaseModel):
    """
    Estimated chain configuration for one wet signal.

    score is the SI-SDR in dB of the chain re-rendered from dry_estimate
    against the target wet signal.
    """

    model_config = ConfigDict(frozen=True)

    chain: ChainConfig = Field(description="Estimated chain")
    dry_estimate: AudioBuffer = Field(description="Dry estimate the chain is applied to")
    score: float = Field(description="Reconstruction SI-SDR in dB")
    trace: tuple[TrialRecord, ...] = Field(default_factory=tuple, description="All trials")
    mode: SearchMode = Field(description="Task division used")
    seed: int = Field(description="Seed of the run")
    searched: bool = Field(default=True, description="Whether the search stage ran")
    entry_id: str | None = Field(default=None, description="Manifest entry, if known")

    @property
    def evaluations(self) -> int:
        return len(self.trace)

    def to_json_dict(
        self, trace_path: str | None = None, dry_estimate_path: str | None = None
    ) -> dict[str, Any]:
        """Result record: chain, score_db, trace_path, mode, seed."""
        return {
            "entry_id": self.entry_id,
            "chain": self.chain.to_json_dict(),
            "score_db": self.score,
            "trace_path": trace_path,
            "dry_estimate_path": dry_estimate_path,
            "mode": self.mode.value,
            "seed": self.seed,
            "searched": self.searched,
            "evaluations": self.evaluations,
        }


class StoredResult(BaseModel):
    """An EstimationResult as read back from its JSON record."""

    entry_id: str | None = None
    chain: ChainConfig
    score_db: float
    trace_path: str | None = None
    dry_estimate_path: str | None = None
    mode: SearchMode
    seed: int
    searched: bool = True
    evaluations: int = 0

    @classmethod
    def from_json_dict(cls, data: dict[str, Any]) -> "StoredResult":
        payload = dict(data)
        payload["chain"] = ChainConfig.from_json_dict(data["chain"])
        return cls.model_validate(payload)
