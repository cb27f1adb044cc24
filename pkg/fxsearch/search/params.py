"""
Reconstruction-driven parameter search for a fixed ordered type sequence.

The objective re-renders the chain on the dry estimate and scores it by
SI-SDR against the target wet signal.
"""

from collections.abc import Sequence

import logfire
import numpy as np
from numpy.typing import NDArray

from fxsearch.effects.chain import apply_chain
from fxsearch.exceptions import ArgumentError, DimensionError, SilentSignalError
from fxsearch.metrics.signal import SI_SDR_CAP_DB, si_sdr
from fxsearch.models.audio import TARGET_RMS, AudioBuffer
from fxsearch.models.chain import MAX_CHAIN_LENGTH, ChainConfig
from fxsearch.models.params import EffectParams, EffectType, dimension
from fxsearch.models.results import SearchBudget, TrialRecord
from fxsearch.optim.base import Objective
from fxsearch.optim.cmaes import DEFAULT_SIGMA0, cmaes_maximize
from fxsearch.optim.tpe import N_CANDIDATES, tpe_maximize

DEFAULT_EXPONENT = 1.5


def reconstruct(dry_est: AudioBuffer, chain: ChainConfig, target_rms: float = TARGET_RMS) -> AudioBuffer:
    """Re-render a chain on a dry estimate with the dataset conventions."""
    return apply_chain(dry_est, chain, target_rms)


class ReconstructionObjective:
    """
    SI-SDR of the re-rendered chain against the target.

    Module-level and picklable so populations can be scored in worker
    processes. Candidates whose render goes silent score the floor.
    """

    def __init__(
        self,
        wet: AudioBuffer,
        dry_est: AudioBuffer,
        types: Sequence[EffectType],
        target_rms: float = TARGET_RMS,
    ):
        self.wet = wet
        self.dry_est = dry_est
        self.types = tuple(types)
        self.target_rms = target_rms

    def chain(self, candidate: Sequence[float]) -> ChainConfig:
        return ChainConfig.from_vector(self.types, list(candidate))

    def __call__(self, candidate: NDArray[np.float64]) -> float:
        try:
            rendered = reconstruct(self.dry_est, self.chain(candidate), self.target_rms)
        except SilentSignalError:
            return -SI_SDR_CAP_DB
        return si_sdr(rendered, self.wet)


def check_search_inputs(wet: AudioBuffer, dry_est: AudioBuffer, types: Sequence[EffectType]) -> None:
    """
    Raises:
        ArgumentError: If types is empty or longer than a chain
        SilentSignalError: If the dry estimate is silent
        DimensionError: If wet and dry estimate lengths differ
    """
    if not types:
        raise ArgumentError("Parameter search needs at least one effect type")
    if len(types) > MAX_CHAIN_LENGTH:
        raise ArgumentError(
            f"Parameter search got {len(types)} types (max {MAX_CHAIN_LENGTH})",
            details={"types": [t.value for t in types]},
        )
    if dry_est.is_silent():
        raise SilentSignalError("Dry estimate is silent", rms=dry_est.rms())
    if len(dry_est) != len(wet):
        raise DimensionError(
            f"Dry estimate has {len(dry_est)} samples, wet has {len(wet)}",
            details={"dry": len(dry_est), "wet": len(wet)},
        )


def search_params(
    wet: AudioBuffer,
    dry_est: AudioBuffer,
    types: Sequence[EffectType],
    m0: int,
    init: Sequence[EffectParams] | None = None,
    seed: int = 0,
    r: float = DEFAULT_EXPONENT,
    sigma0: float = DEFAULT_SIGMA0,
    tpe_candidates: int = N_CANDIDATES,
    target_rms: float = TARGET_RMS,
    label: str = "search",
) -> tuple[list[EffectParams], float, tuple[TrialRecord, ...]]:
    """
    Search the parameters of an ordered type sequence.

    TPE handles d == 1, CMA-ES everything larger; the budget is
    floor(m0 * d^r) evaluations.

    Args:
        wet: Target wet signal
        dry_est: Dry estimate the chain is rendered on
        types: Ordered effect types
        m0: Base number of trials
        init: Per-stage initial parameters, evaluated as the first trial
        seed: Optimizer seed
        r: Budget exponent
        sigma0: Initial CMA-ES step size
        tpe_candidates: TPE draws per proposal
        target_rms: Per-stage level
        label: Stage label recorded on every trial

    Returns:
        (best per-stage parameters, best score in dB, trace)

    Raises:
        ArgumentError: If types is empty or init does not match types
        SilentSignalError: If the dry estimate is silent
    """
    types = tuple(EffectType(t) for t in types)
    check_search_inputs(wet, dry_est, types)
    d = sum(dimension(t) for t in types)
    budget = SearchBudget(m0=m0, d=d, r=r)

    start: list[float] | None = None
    if init is not None:
        init_types = tuple(p.effect_type for p in init)
        if init_types != types:
            raise ArgumentError(
                "Initial parameters do not match the searched types",
                details={"types": [t.value for t in types], "init": [t.value for t in init_types]},
            )
        start = [v for p in init for v in p.values]

    fn = ReconstructionObjective(wet, dry_est, types, target_rms)
    chain_label = f"{label}:{'>'.join(t.short for t in types)}"
    objective = Objective(fn, d, label=chain_label)

    if d == 1:
        run = tpe_maximize(
            objective,
            budget,
            init=start[0] if start is not None else None,
            seed=seed,
            n_candidates=tpe_candidates,
        )
    else:
        run = cmaes_maximize(objective, d, budget, init=start, seed=seed, sigma0=sigma0)

    best = fn.chain(run.best_candidate)
    logfire.debug(
        "parameter search done",
        label=chain_label,
        d=d,
        trials=len(run.history),
        best_score=run.best_score,
    )
    return list(best.stages), run.best_score, run.history
