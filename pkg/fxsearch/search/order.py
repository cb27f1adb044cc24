"""
Two-stage permutation search for an unordered type combination.

Stage 1 runs a short search for every ordering; stage 2 refines the winning
ordering with a larger budget, seeded with the stage-1 best parameters.
"""

import hashlib
import itertools
from collections.abc import Iterable
from typing import Any

import logfire

from fxsearch.exceptions import ArgumentError
from fxsearch.models.audio import TARGET_RMS, AudioBuffer
from fxsearch.models.chain import MAX_CHAIN_LENGTH, ChainConfig
from fxsearch.models.params import EffectParams, EffectType
from fxsearch.models.results import TrialRecord
from fxsearch.optim.cmaes import DEFAULT_SIGMA0
from fxsearch.optim.tpe import N_CANDIDATES
from fxsearch.search.params import DEFAULT_EXPONENT, search_params

M0_FIRST_STAGE = 5
M0_SECOND_STAGE = 20

STAGE_ONE = "stage1"
STAGE_TWO = "stage2"


def derive_seed(seed: int, key: int | str) -> int:
    """Stable 63-bit sub-seed for (seed, key)."""
    digest = hashlib.blake2b(f"{seed}:{key}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big") >> 1


def permutations_of(combo: Iterable[EffectType]) -> list[tuple[EffectType, ...]]:
    """All orderings, enumerated from the canonical type order."""
    ordered = sorted(set(combo), key=lambda t: list(EffectType).index(t))
    return list(itertools.permutations(ordered))


def search_order_and_params(
    wet: AudioBuffer,
    dry_est: AudioBuffer,
    combo: Iterable[EffectType],
    seed: int = 0,
    m0_first: int = M0_FIRST_STAGE,
    m0_second: int = M0_SECOND_STAGE,
    r: float = DEFAULT_EXPONENT,
    sigma0: float = DEFAULT_SIGMA0,
    tpe_candidates: int = N_CANDIDATES,
    target_rms: float = TARGET_RMS,
) -> tuple[ChainConfig, float, tuple[TrialRecord, ...]]:
    """
    Find the order and parameters of an unordered type combination.

    Args:
        wet: Target wet signal
        dry_est: Dry estimate
        combo: Unordered effect types (1 to 3)
        seed: Run seed; permutation i uses derive_seed(seed, i)
        m0_first: Base trials per permutation in stage 1
        m0_second: Base trials for the stage-2 refinement
        r: Budget exponent
        sigma0: Initial CMA-ES step size
        tpe_candidates: TPE draws per proposal
        target_rms: Per-stage level

    Returns:
        (best chain, best score in dB, stage-1 then stage-2 trials)

    Raises:
        ArgumentError: If combo is empty or too large
    """
    orders = permutations_of(combo)
    if not orders or not orders[0]:
        raise ArgumentError("Permutation search needs a non-empty type combination")
    if len(orders[0]) > MAX_CHAIN_LENGTH:
        raise ArgumentError(
            f"Type combination of size {len(orders[0])} exceeds {MAX_CHAIN_LENGTH}",
            details={"types": [t.value for t in orders[0]]},
        )

    common: dict[str, Any] = {
        "r": r,
        "sigma0": sigma0,
        "tpe_candidates": tpe_candidates,
        "target_rms": target_rms,
    }

    with logfire.span(
        "search order and params", combo="".join(t.short for t in orders[0]), permutations=len(orders)
    ):
        stage_one = [
            search_params(
                wet, dry_est, order, m0_first, seed=derive_seed(seed, i), label=STAGE_ONE, **common
            )
            for i, order in enumerate(orders)
        ]

        trace: list[TrialRecord] = []
        for _, _, trials in stage_one:
            trace.extend(trials)

        # Earliest permutation wins ties
        winner = max(range(len(orders)), key=lambda i: (stage_one[i][1], -i))
        best_params, best_score, _ = stage_one[winner]
        logfire.info(
            "stage 1 winner",
            order=">".join(t.short for t in orders[winner]),
            score=best_score,
        )

        refined, refined_score, refined_trials = search_params(
            wet,
            dry_est,
            orders[winner],
            m0_second,
            init=best_params,
            seed=derive_seed(seed, STAGE_TWO),
            label=STAGE_TWO,
            **common,
        )
        trace.extend(refined_trials)

        final: list[EffectParams] = best_params
        if refined_score >= best_score:
            final, best_score = refined, refined_score

    return ChainConfig(stages=tuple(final)), best_score, tuple(trace)
