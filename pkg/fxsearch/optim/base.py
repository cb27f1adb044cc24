"""
Objective wrapper and optimizer run records shared by CMA-ES and TPE.
"""

from collections.abc import Callable

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field

from fxsearch.models.results import SearchBudget, TrialRecord

ObjectiveFn = Callable[[NDArray[np.float64]], float]


class Objective:
    """
    Black-box objective on [0, 1]^d, higher is better.

    Counts evaluations. The wrapped function must be deterministic.
    """

    def __init__(self, fn: ObjectiveFn, dimension: int, label: str = ""):
        self.fn = fn
        self.dimension = dimension
        self.label = label
        self.evaluations = 0

    def __call__(self, candidate: NDArray[np.float64]) -> float:
        self.evaluations += 1
        return float(self.fn(candidate))


def clamp_unit(x: NDArray[np.float64]) -> NDArray[np.float64]:
    """Clamp a candidate into the unit box."""
    return np.clip(x, 0.0, 1.0)


class OptimizerRun(BaseModel):
    """
    Full record of one optimizer run.

    history holds exactly budget.trials() evaluations; best is the best-ever
    trial (earliest on ties).
    """

    model_config = ConfigDict(frozen=True)

    optimizer: str = Field(description="'cmaes' or 'tpe'")
    seed: int = Field(description="Seed of the run")
    budget: SearchBudget = Field(description="Trial budget")
    init: tuple[float, ...] | None = Field(default=None, description="Initial solution")
    history: tuple[TrialRecord, ...] = Field(description="All evaluations in order")

    @property
    def best(self) -> TrialRecord:
        best = self.history[0]
        for trial in self.history[1:]:
            if trial.score > best.score:
                best = trial
        return best

    @property
    def best_candidate(self) -> tuple[float, ...]:
        return self.best.candidate

    @property
    def best_score(self) -> float:
        return self.best.score


class HistoryBuilder:
    """Accumulates trials while an optimizer runs."""

    def __init__(self, label: str = ""):
        self.label = label
        self.records: list[TrialRecord] = []

    def add(self, candidate: NDArray[np.float64], score: float) -> None:
        self.records.append(
            TrialRecord(
                index=len(self.records),
                candidate=tuple(float(v) for v in candidate),
                score=score,
                stage=self.label,
            )
        )

    def __len__(self) -> int:
        return len(self.records)
