"""
One-dimensional Tree-structured Parzen Estimator on [0, 1].

After a uniform start-up phase, observed trials are split into a good and a
bad group, each group is modelled by a Gaussian-kernel density, and the next
candidate maximizes the good/bad density ratio among draws from the good
density.
"""

import math

import logfire
import numpy as np
from numpy.typing import NDArray
from scipy.special import logsumexp

from fxsearch.exceptions import OptimizerSelectionError
from fxsearch.models.results import SearchBudget
from fxsearch.optim.base import HistoryBuilder, Objective, OptimizerRun

MAX_STARTUP = 10
MAX_GOOD = 25
GAMMA = 0.1
N_CANDIDATES = 24
MIN_BANDWIDTH = 1e-3


def n_startup_trials(trials: int) -> int:
    return min(MAX_STARTUP, trials // 2)


def n_good(n: int) -> int:
    """Size of the good group: min(ceil(0.1 n), 25), at least one."""
    return max(1, min(math.ceil(GAMMA * n), MAX_GOOD))


class ParzenEstimator:
    """Equal-weight Gaussian-kernel density on [0, 1]."""

    def __init__(self, points: NDArray[np.float64]):
        self.points = np.asarray(points, dtype=np.float64)
        self.bandwidth = self.scott_bandwidth(self.points)

    @staticmethod
    def scott_bandwidth(points: NDArray[np.float64]) -> float:
        """Scott's rule sigma * n^(-1/5), floored at 1e-3."""
        if len(points) < 2:
            return MIN_BANDWIDTH
        sigma = float(np.std(points, ddof=1))
        return max(MIN_BANDWIDTH, sigma * len(points) ** (-0.2))

    def sample(self, rng: np.random.Generator, size: int) -> NDArray[np.float64]:
        """Draw from the kernel mixture, clamped to [0, 1]."""
        centres = self.points[rng.integers(0, len(self.points), size)]
        return np.clip(centres + self.bandwidth * rng.standard_normal(size), 0.0, 1.0)

    def log_pdf(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        z = (np.asarray(x, dtype=np.float64)[:, None] - self.points[None, :]) / self.bandwidth
        log_kernels = -0.5 * z**2 - math.log(self.bandwidth * math.sqrt(2 * math.pi))
        return logsumexp(log_kernels, axis=1) - math.log(len(self.points))


def propose(
    xs: NDArray[np.float64],
    scores: NDArray[np.float64],
    rng: np.random.Generator,
    n_candidates: int = N_CANDIDATES,
) -> float:
    """
    Propose the next candidate from the observed trials.

    Args:
        xs: Observed candidates
        scores: Observed scores (higher is better)
        rng: Random generator
        n_candidates: Draws from the good density to rank

    Returns:
        Candidate in [0, 1] maximizing the good/bad density ratio
    """
    order = np.argsort(-scores, kind="stable")
    k = n_good(len(xs))
    good = ParzenEstimator(xs[order[:k]])
    bad = ParzenEstimator(xs[order[k:]])

    candidates = good.sample(rng, n_candidates)
    ratio = good.log_pdf(candidates) - bad.log_pdf(candidates)
    return float(candidates[int(np.argmax(ratio))])


def tpe_maximize(
    obj: Objective,
    budget: SearchBudget,
    init: float | None = None,
    seed: int = 0,
    n_candidates: int = N_CANDIDATES,
) -> OptimizerRun:
    """
    Maximize a one-dimensional objective on [0, 1] with TPE.

    Args:
        obj: Objective to maximize (dimension 1)
        budget: Trial budget
        init: Optional initial candidate, evaluated as trial 0
        seed: Random seed
        n_candidates: Candidates ranked per proposal

    Returns:
        Run with the full history and the best-ever candidate

    Raises:
        OptimizerSelectionError: If the objective is not one-dimensional
    """
    if obj.dimension != 1:
        raise OptimizerSelectionError(
            f"TPE handles d == 1 only, got {obj.dimension}; use CMA-ES",
            dimension=obj.dimension,
            suggested="cmaes",
        )
    trials = budget.trials()
    startup = n_startup_trials(trials)
    rng = np.random.default_rng(seed)
    history = HistoryBuilder(obj.label)

    xs: list[float] = []
    scores: list[float] = []

    def evaluate(x: float) -> None:
        candidate = np.array([min(1.0, max(0.0, x))])
        score = obj(candidate)
        history.add(candidate, score)
        xs.append(float(candidate[0]))
        scores.append(score)

    if init is not None and trials > 0:
        evaluate(float(init))

    while len(history) < trials:
        if len(history) < startup or len(history) < 2:
            evaluate(float(rng.random()))
        else:
            evaluate(propose(np.asarray(xs), np.asarray(scores), rng, n_candidates))

    run = OptimizerRun(
        optimizer="tpe",
        seed=seed,
        budget=budget,
        init=(float(init),) if init is not None else None,
        history=tuple(history.records),
    )
    logfire.debug(
        "tpe finished", label=obj.label, trials=trials, best_score=run.best_score
    )
    return run
