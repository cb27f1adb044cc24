"""
Evaluation protocol over the eval split.

Entries whose ground-truth or estimated chain is empty never contribute to
reconstruction or removal means.
"""

from collections.abc import Sequence
from pathlib import Path
from typing import Any

import logfire

from fxsearch.dataset.audio_io import read_wav
from fxsearch.effects.chain import apply_chain
from fxsearch.evaluation.references import REFERENCE_POINTS
from fxsearch.evaluation.report import MetricSummary, Report, annotate
from fxsearch.exceptions import ArgumentError, EmptyInputError, ManifestError
from fxsearch.metrics.classification import exact_match, levenshtein, macro_f1, param_mae
from fxsearch.metrics.signal import mr_stft, si_sdr
from fxsearch.models.audio import TARGET_RMS, AudioBuffer
from fxsearch.models.chain import ChainConfig
from fxsearch.models.manifest import Manifest, ManifestEntry
from fxsearch.models.params import NONE_CLASS, EffectParams, EffectType, PredictedType
from fxsearch.models.results import EstimationResult, StoredResult

AnyResult = EstimationResult | StoredResult

EFFECT_CLASSES: tuple[EffectType, ...] = tuple(EffectType)
CLASSES_WITH_NONE: tuple[PredictedType, ...] = (*EffectType, NONE_CLASS)


def _check_aligned(a: Sequence[Any], b: Sequence[Any], what: str) -> None:
    if len(a) != len(b):
        raise ArgumentError(
            f"{what}: inputs are not aligned ({len(a)} vs {len(b)})",
            details={"left": len(a), "right": len(b)},
        )
    if not a:
        raise EmptyInputError(f"{what}: no items to evaluate")


def eval_chain_types(results: Sequence[AnyResult], truths: Sequence[ChainConfig]) -> Report:
    """
    Type classification of whole chains.

    macro_f1 over unordered type sets, mean Levenshtein distance and exact
    match over ordered sequences.

    Raises:
        ArgumentError: If the lists are not aligned
        EmptyInputError: If there are no results
    """
    _check_aligned(results, truths, "eval_chain_types")
    predicted = [r.chain.types for r in results]
    expected = [t.types for t in truths]

    distances = [levenshtein(p, t) for p, t in zip(predicted, expected, strict=True)]
    rows = [
        {
            "entry_id": r.entry_id,
            "predicted": r.chain.describe(),
            "truth": t.describe(),
            "levenshtein": ld,
            "exact": int(r.chain.types == t.types),
        }
        for r, t, ld in zip(results, truths, distances, strict=True)
    ]
    n = len(results)
    report = Report(
        name="chain_types",
        metrics={
            "macro_f1": MetricSummary.aggregate(
                macro_f1([frozenset(p) for p in predicted], [frozenset(t) for t in expected], EFFECT_CLASSES),
                n,
            ),
            "mean_ld": MetricSummary.from_values([float(d) for d in distances]),
            "ema": MetricSummary.aggregate(exact_match(predicted, expected), n),
        },
        rows=rows,
    )
    return annotate(report, REFERENCE_POINTS["chain_types"])


def load_dry_estimate(result: AnyResult, results_dir: Path | None) -> AudioBuffer:
    """
    The dry estimate a result was scored with.

    Raises:
        ManifestError: If a stored result has no dry estimate file
        AudioIOError: If the file cannot be read
    """
    if isinstance(result, EstimationResult):
        return result.dry_estimate
    if result.dry_estimate_path is None or results_dir is None:
        raise ManifestError(
            f"Result {result.entry_id} has no stored dry estimate",
            details={"entry_id": result.entry_id},
        )
    return read_wav(results_dir / result.dry_estimate_path)


def _entries_for(results: Sequence[AnyResult], manifest: Manifest) -> list[ManifestEntry]:
    entries = []
    for result in results:
        if result.entry_id is None:
            raise ManifestError("Result carries no entry id; cannot match it to the manifest")
        entries.append(manifest.get(result.entry_id))
    return entries


def eval_reconstruction(
    results: Sequence[AnyResult],
    manifest: Manifest,
    use_ground_truth_dry: bool = True,
    results_dir: Path | None = None,
    target_rms: float = TARGET_RMS,
) -> Report:
    """
    Wet-signal reconstruction quality.

    Each estimated chain is rendered on the ground-truth dry signal (flag
    on) or on the result's own dry estimate (flag off) and compared with the
    stored wet signal.

    Args:
        results: Estimation results carrying entry ids
        manifest: Corpus manifest
        use_ground_truth_dry: Render on the true dry signal
        results_dir: Directory holding stored dry estimates
        target_rms: Per-stage level

    Returns:
        Report with si_sdr and mr_stft

    Raises:
        ManifestError: If a result cannot be matched to an entry
        AudioIOError: If an audio file is missing
    """
    entries = _entries_for(results, manifest)
    si_sdrs: list[float] = []
    distances: list[float] = []
    rows: list[dict[str, Any]] = []
    excluded = 0

    with logfire.span("eval reconstruction", entries=len(results), ground_truth_dry=use_ground_truth_dry):
        for result, entry in zip(results, entries, strict=True):
            if entry.chain.is_empty or result.chain.is_empty:
                excluded += 1
                continue
            dry = (
                read_wav(manifest.resolve(entry.dry_path))
                if use_ground_truth_dry
                else load_dry_estimate(result, results_dir)
            )
            wet = read_wav(manifest.resolve(entry.wet_path))
            rendered = apply_chain(dry, result.chain, target_rms)
            score = si_sdr(rendered, wet)
            distance = mr_stft(rendered, wet)
            si_sdrs.append(score)
            distances.append(distance)
            rows.append(
                {
                    "entry_id": entry.entry_id,
                    "truth": entry.chain.describe(),
                    "predicted": result.chain.describe(),
                    "si_sdr": score,
                    "mr_stft": distance,
                }
            )

    report = Report(
        name="reconstruction",
        metrics={
            "si_sdr": MetricSummary.from_values(si_sdrs),
            "mr_stft": MetricSummary.from_values(distances),
        },
        rows=rows,
        excluded=excluded,
    )
    logfire.info("reconstruction evaluated", counted=len(rows), excluded=excluded)
    return annotate(report, REFERENCE_POINTS["reconstruction"])


def eval_signal(
    estimates: Sequence[AudioBuffer],
    references: Sequence[AudioBuffer],
    name: str = "signal",
    ids: Sequence[str] | None = None,
) -> Report:
    """
    Pairwise SI-SDR and MR-STFT of estimates against references.

    Raises:
        ArgumentError: If the lists are not aligned
        DimensionError: If a pair differs in length
    """
    _check_aligned(estimates, references, "eval_signal")
    si_sdrs = [si_sdr(e, r) for e, r in zip(estimates, references, strict=True)]
    distances = [mr_stft(e, r) for e, r in zip(estimates, references, strict=True)]
    labels = list(ids) if ids is not None else [str(i) for i in range(len(estimates))]
    rows = [
        {"entry_id": label, "si_sdr": s, "mr_stft": m}
        for label, s, m in zip(labels, si_sdrs, distances, strict=True)
    ]
    return Report(
        name=name,
        metrics={
            "si_sdr": MetricSummary.from_values(si_sdrs),
            "mr_stft": MetricSummary.from_values(distances),
        },
        rows=rows,
    )


def eval_dry_removal(
    results: Sequence[AnyResult], manifest: Manifest, results_dir: Path | None = None
) -> Report:
    """Dry-estimate quality (whole-chain removal), empty chains excluded."""
    entries = _entries_for(results, manifest)
    estimates, references, ids = [], [], []
    excluded = 0
    for result, entry in zip(results, entries, strict=True):
        if entry.chain.is_empty or result.chain.is_empty:
            excluded += 1
            continue
        estimates.append(load_dry_estimate(result, results_dir))
        references.append(read_wav(manifest.resolve(entry.dry_path)))
        ids.append(entry.entry_id)
    if not estimates:
        return Report(name="dry_removal", excluded=excluded)
    report = eval_signal(estimates, references, name="dry_removal", ids=ids)
    report = report.model_copy(update={"excluded": excluded})
    return annotate(report, REFERENCE_POINTS["dry_removal"])


def eval_bypass_removal(
    bypass_estimates: Sequence[AudioBuffer], entries: Sequence[ManifestEntry], manifest: Manifest
) -> Report:
    """
    Bypass-estimate quality (single-effect removal).

    bypass_estimates[i] is compared with the true signal before the last
    effect of entries[i]; empty-chain entries are excluded.
    """
    _check_aligned(bypass_estimates, entries, "eval_bypass_removal")
    estimates, references, ids = [], [], []
    excluded = 0
    for estimate, entry in zip(bypass_estimates, entries, strict=True):
        if entry.chain.is_empty:
            excluded += 1
            continue
        before_last = (
            entry.intermediate_paths[-2] if entry.chain.length >= 2 else entry.dry_path
        )
        estimates.append(estimate)
        references.append(read_wav(manifest.resolve(before_last)))
        ids.append(entry.entry_id)
    if not estimates:
        return Report(name="bypass_removal", excluded=excluded)
    report = eval_signal(estimates, references, name="bypass_removal", ids=ids)
    report = report.model_copy(update={"excluded": excluded})
    return annotate(report, REFERENCE_POINTS["bypass_removal"])


def eval_single_type(
    predicted_last: Sequence[PredictedType], true_last: Sequence[PredictedType]
) -> Report:
    """
    Classification of the last-applied effect (None class for dry input).

    Reports macro F1 over the three types plus None, macro F1 over the
    three types only, and accuracy.
    """
    _check_aligned(predicted_last, true_last, "eval_single_type")
    n = len(predicted_last)
    accuracy = sum(p == t for p, t in zip(predicted_last, true_last, strict=True)) / n
    report = Report(
        name="single_type",
        metrics={
            "macro_f1": MetricSummary.aggregate(
                macro_f1(list(predicted_last), list(true_last), CLASSES_WITH_NONE), n
            ),
            "macro_f1_effects": MetricSummary.aggregate(
                macro_f1(list(predicted_last), list(true_last), EFFECT_CLASSES), n
            ),
            "accuracy": MetricSummary.aggregate(accuracy, n),
        },
        rows=[
            {"predicted": p.value, "truth": t.value}
            for p, t in zip(predicted_last, true_last, strict=True)
        ],
    )
    return annotate(report, REFERENCE_POINTS["single_type"])


def eval_last_params(
    predicted: Sequence[EffectParams | None], truth: Sequence[EffectParams]
) -> Report:
    """
    Parameter MAE of the last-applied effect.

    Pairs whose predicted type differs from the truth (or that carry no
    parameters) cannot be compared and are counted as excluded.
    """
    _check_aligned(predicted, truth, "eval_last_params")
    errors: list[float] = []
    rows: list[dict[str, Any]] = []
    excluded = 0
    for p, t in zip(predicted, truth, strict=True):
        if p is None or p.effect_type is not t.effect_type:
            excluded += 1
            continue
        error = param_mae(p, t)
        errors.append(error)
        rows.append({"type": t.effect_type.value, "param_mae": error})
    report = Report(
        name="last_params",
        metrics={"param_mae": MetricSummary.from_values(errors)},
        rows=rows,
        excluded=excluded,
    )
    return annotate(report, REFERENCE_POINTS["last_params"])
