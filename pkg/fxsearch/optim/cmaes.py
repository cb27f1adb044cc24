"""
CMA-ES for maximization on the unit box, driven through pycma's ask/tell loop.

The strategy runs with pycma's (mu/mu_w, lambda) defaults and box bounds
[0, 1]. Evaluated candidates are clamped into the box and the same points are
told back, negated, since pycma minimizes.
"""

import math
from collections.abc import Sequence

import cma
import logfire
import numpy as np

from fxsearch.exceptions import ArgumentError, OptimizerSelectionError
from fxsearch.models.results import SearchBudget
from fxsearch.optim.base import HistoryBuilder, Objective, OptimizerRun, clamp_unit

DEFAULT_SIGMA0 = 0.2


def population_size(d: int) -> int:
    """lambda = 4 + floor(3 ln d)."""
    return 4 + int(math.floor(3 * math.log(d)))


def _cma_seed(seed: int) -> int:
    # pycma treats 0 as "seed from the clock" and hands the value to numpy
    return seed % (2**32 - 1) + 1


def cma_options(d: int, seed: int) -> cma.CMAOptions:
    """Options for one run: fixed population, unit-box bounds, silent."""
    return cma.CMAOptions(
        {
            "popsize": population_size(d),
            "seed": _cma_seed(seed),
            "bounds": [0.0, 1.0],
            "verbose": -9,
            "verb_disp": 0,
            "verb_log": 0,
        }
    )


def cmaes_maximize(
    obj: Objective,
    d: int,
    budget: SearchBudget,
    init: Sequence[float] | None = None,
    seed: int = 0,
    sigma0: float = DEFAULT_SIGMA0,
) -> OptimizerRun:
    """
    Maximize an objective on [0, 1]^d with CMA-ES.

    Args:
        obj: Objective to maximize
        d: Search dimension (>= 2)
        budget: Trial budget; every trial is one evaluation
        init: Initial mean; evaluated as trial 0 when given
        seed: Random seed
        sigma0: Initial step size

    Returns:
        Run with the full history and the best-ever candidate

    Raises:
        OptimizerSelectionError: If d < 2
        ArgumentError: If the budget is smaller than one generation
    """
    if d < 2:
        raise OptimizerSelectionError(
            f"CMA-ES needs d >= 2, got {d}; use TPE", dimension=d, suggested="tpe"
        )
    trials = budget.trials()
    lam = population_size(d)
    if trials < lam:
        raise ArgumentError(
            f"Budget of {trials} trials is smaller than one generation ({lam})",
            details={"trials": trials, "population": lam},
        )

    history = HistoryBuilder(obj.label)

    if init is not None:
        start = clamp_unit(np.asarray(init, dtype=np.float64))
        if start.shape != (d,):
            raise ArgumentError(
                f"Initial solution has length {start.shape[0]}, expected {d}",
                details={"d": d},
            )
        history.add(start, obj(start))
    else:
        start = np.full(d, 0.5)

    es = cma.CMAEvolutionStrategy(start.tolist(), sigma0, cma_options(d, seed))
    # pycma's stop conditions are advisory here; the budget alone ends the run
    while len(history) < trials:
        clamped = [clamp_unit(np.asarray(x, dtype=np.float64)) for x in es.ask()]
        batch = clamped[: trials - len(history)]
        scores = [obj(candidate) for candidate in batch]
        for candidate, score in zip(batch, scores, strict=True):
            history.add(candidate, score)
        if len(batch) < len(clamped):
            break
        es.tell(clamped, [-s for s in scores])

    run = OptimizerRun(
        optimizer="cmaes",
        seed=seed,
        budget=budget,
        init=tuple(float(v) for v in init) if init is not None else None,
        history=tuple(history.records),
    )
    logfire.debug(
        "cmaes finished",
        label=obj.label,
        d=d,
        trials=trials,
        best_score=run.best_score,
        final_sigma=float(es.sigma),
        stop=dict(es.stop()),
    )
    return run
