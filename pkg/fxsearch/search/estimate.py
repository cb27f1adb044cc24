"""
End-to-end estimation: prediction stage followed by the search stage.

Modes:
- direct: the predictor returns the unordered types and a dry estimate;
  order and parameters come from the permutation search
- type-iter: the predictor peels off one effect at a time until it
  predicts the None class or three effects are found; parameters are
  searched jointly afterwards
- config-iter: as type-iter, with the predicted parameters as the
  initial solution
"""

from typing import Any

import logfire

from fxsearch.config import Settings
from fxsearch.exceptions import InvariantViolationError
from fxsearch.metrics.signal import si_sdr
from fxsearch.models.audio import AudioBuffer
from fxsearch.models.chain import MAX_CHAIN_LENGTH, ChainConfig
from fxsearch.models.params import EffectParams, EffectType
from fxsearch.models.results import EstimationResult, SearchMode, TrialRecord
from fxsearch.predictor.base import LastPrediction, Predictor
from fxsearch.search.order import derive_seed, permutations_of, search_order_and_params
from fxsearch.search.params import reconstruct, search_params

CONSISTENCY_TOLERANCE_DB = 1e-6
ITERATIVE_LABEL = "iter"


def iterate_last(predictor: Predictor, wet: AudioBuffer) -> tuple[list[LastPrediction], AudioBuffer]:
    """
    Peel effects off a wet signal with predict_last.

    Returns:
        (predictions in removal order, final bypass used as the dry estimate)
    """
    collected: list[LastPrediction] = []
    current = wet
    while len(collected) < MAX_CHAIN_LENGTH:
        prediction = predictor.predict_last(current)
        if prediction.is_stop:
            return collected, prediction.bypass
        collected.append(prediction)
        current = prediction.bypass
    return collected, current


def _score(dry_est: AudioBuffer, chain: ChainConfig, wet: AudioBuffer, target_rms: float) -> float:
    return si_sdr(reconstruct(dry_est, chain, target_rms), wet)


def _baseline_params(prediction: LastPrediction, use_predicted: bool) -> EffectParams:
    assert isinstance(prediction.effect, EffectType)
    if use_predicted and prediction.params is not None:
        return prediction.params
    return EffectParams.midpoint(prediction.effect)


def estimate(
    wet: AudioBuffer,
    predictor: Predictor,
    mode: SearchMode,
    seed: int = 0,
    search: bool = True,
    settings: Settings | None = None,
    entry_id: str | None = None,
) -> EstimationResult:
    """
    Estimate the chain that produced a wet signal.

    With search disabled the prediction is used as-is: predicted parameters
    in config-iter mode, the normalized midpoint otherwise (and the
    canonical type order in direct mode).

    Args:
        wet: Target wet signal
        predictor: Prediction-stage stand-in supporting the mode
        mode: Division of work between prediction and search
        seed: Run seed
        search: Whether to run the search stage
        settings: Budgets and optimizer knobs (defaults when None)
        entry_id: Manifest entry id recorded on the result

    Returns:
        Estimated chain, dry estimate, reconstruction score and trace

    Raises:
        PredictorError: If the predictor does not support the mode
        SilentSignalError: If the dry estimate is silent
        InvariantViolationError: If the reported score cannot be reproduced
    """
    settings = settings or Settings()
    predictor.require(mode)
    knobs: dict[str, Any] = {
        "r": settings.budget_exponent,
        "sigma0": settings.cmaes_sigma0,
        "tpe_candidates": settings.tpe_n_candidates,
        "target_rms": settings.target_rms,
    }

    with logfire.span("estimate", mode=mode.value, predictor=predictor.name, entry_id=entry_id):
        trace: tuple[TrialRecord, ...] = ()
        if mode is SearchMode.DRY_TYPE_DIRECT:
            direct = predictor.predict_direct(wet)
            dry_est = direct.dry_estimate
            if not direct.types:
                chain = ChainConfig.empty()
                score = _score(dry_est, chain, wet, settings.target_rms)
            elif search:
                chain, score, trace = search_order_and_params(
                    wet,
                    dry_est,
                    direct.types,
                    seed=seed,
                    m0_first=settings.m0_first_stage,
                    m0_second=settings.m0_second_stage,
                    **knobs,
                )
            else:
                order = permutations_of(direct.types)[0]
                chain = ChainConfig(stages=tuple(EffectParams.midpoint(t) for t in order))
                score = _score(dry_est, chain, wet, settings.target_rms)
        else:
            collected, dry_est = iterate_last(predictor, wet)
            # Removal order is last-applied first
            collected.reverse()
            types = [EffectType(p.effect) for p in collected]
            if not collected:
                chain = ChainConfig.empty()
                score = _score(dry_est, chain, wet, settings.target_rms)
            elif search:
                init = (
                    [_baseline_params(p, use_predicted=True) for p in collected]
                    if mode.has_param_prediction
                    else None
                )
                stages, score, trace = search_params(
                    wet,
                    dry_est,
                    types,
                    settings.m0_second_stage,
                    init=init,
                    seed=derive_seed(seed, ITERATIVE_LABEL),
                    label=ITERATIVE_LABEL,
                    **knobs,
                )
                chain = ChainConfig(stages=tuple(stages))
            else:
                chain = ChainConfig(
                    stages=tuple(
                        _baseline_params(p, use_predicted=mode.has_param_prediction) for p in collected
                    )
                )
                score = _score(dry_est, chain, wet, settings.target_rms)

        if search and not chain.is_empty:
            check = _score(dry_est, chain, wet, settings.target_rms)
            if abs(check - score) > CONSISTENCY_TOLERANCE_DB:
                raise InvariantViolationError(
                    "Reported score does not match the re-rendered chain",
                    details={"reported": score, "recomputed": check},
                )

        logfire.info(
            "estimated {chain}",
            chain=chain.describe(),
            score=score,
            evaluations=len(trace),
            searched=search,
        )

    return EstimationResult(
        chain=chain,
        dry_estimate=dry_est,
        score=score,
        trace=trace,
        mode=mode,
        seed=seed,
        searched=search,
        entry_id=entry_id,
    )
