"""
Heuristic predictor: thresholded hand-crafted features.

Thresholds are fitted per feature on a labelled calibration split by
maximizing binary F1 of "effect type present"; for each type the feature
with the best calibration F1 is used. The dry estimate is the input
unchanged, so the search stage sees the wet signal as its dry signal.
"""

import json
from collections.abc import Iterable
from enum import Enum
from pathlib import Path

import logfire
import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from fxsearch.exceptions import AudioIOError, CalibrationError, PredictorError
from fxsearch.models.audio import AudioBuffer
from fxsearch.models.chain import ChainConfig
from fxsearch.models.params import EffectType
from fxsearch.predictor.base import DirectPrediction, LastPrediction, Predictor
from fxsearch.predictor.features import FEATURES, extract_features


class Direction(str, Enum):
    """Which side of the threshold means 'effect present'."""

    ABOVE = "above"
    BELOW = "below"


class FeatureThreshold(BaseModel):
    """Fitted decision rule for one feature."""

    model_config = ConfigDict(frozen=True)

    feature: str
    effect: EffectType
    threshold: float
    direction: Direction
    f1: float = Field(description="Binary F1 on the calibration split")

    def fires(self, value: float) -> bool:
        if self.direction is Direction.ABOVE:
            return value > self.threshold
        return value < self.threshold


class CalibrationSample(BaseModel):
    """Labelled signal for threshold fitting."""

    model_config = ConfigDict(frozen=True)

    audio: AudioBuffer
    chain: ChainConfig


def _binary_f1(predicted: np.ndarray, labels: np.ndarray) -> float:
    tp = int(np.sum(predicted & labels))
    fp = int(np.sum(predicted & ~labels))
    fn = int(np.sum(~predicted & labels))
    return 2 * tp / (2 * tp + fp + fn) if tp else 0.0


def fit_threshold(
    feature: str, effect: EffectType, values: np.ndarray, labels: np.ndarray
) -> FeatureThreshold:
    """
    Choose the threshold and direction maximizing binary F1.

    Candidate thresholds are midpoints between consecutive distinct values,
    plus one below the minimum and one above the maximum. Each direction is
    scanned from its never-firing end, so ties keep the most conservative
    rule and a feature without positive labels never fires.
    """
    distinct = np.unique(values)
    midpoints = (distinct[:-1] + distinct[1:]) / 2.0
    candidates = np.concatenate([[distinct[0] - 1.0], midpoints, [distinct[-1] + 1.0]])

    best: FeatureThreshold | None = None
    for direction in (Direction.ABOVE, Direction.BELOW):
        scan = candidates[::-1] if direction is Direction.ABOVE else candidates
        for threshold in scan:
            predicted = values > threshold if direction is Direction.ABOVE else values < threshold
            f1 = _binary_f1(predicted, labels)
            if best is None or f1 > best.f1:
                best = FeatureThreshold(
                    feature=feature,
                    effect=effect,
                    threshold=float(threshold),
                    direction=direction,
                    f1=f1,
                )
    assert best is not None
    return best


class HeuristicPredictor(Predictor):
    """Feature-threshold detector for the unordered type combination."""

    name = "heuristic"
    supports_direct = True

    def __init__(self, thresholds: dict[str, FeatureThreshold]):
        if not thresholds:
            raise CalibrationError("Heuristic predictor needs at least one fitted threshold")
        self.thresholds = thresholds
        self.selected = self._select(thresholds)

    @staticmethod
    def _select(thresholds: dict[str, FeatureThreshold]) -> dict[EffectType, FeatureThreshold]:
        selected: dict[EffectType, FeatureThreshold] = {}
        for name in sorted(thresholds):
            rule = thresholds[name]
            current = selected.get(rule.effect)
            if current is None or rule.f1 > current.f1:
                selected[rule.effect] = rule
        return selected

    @classmethod
    def calibrate(cls, samples: Iterable[CalibrationSample]) -> "HeuristicPredictor":
        """
        Fit thresholds on a labelled split.

        Samples are consumed once, so a lazy iterable keeps only features in
        memory.

        Raises:
            CalibrationError: If the split is empty
        """
        with logfire.span("calibrate heuristic predictor"):
            rows: list[dict[str, float]] = []
            type_sets: list[frozenset[EffectType]] = []
            for sample in samples:
                rows.append(extract_features(sample.audio))
                type_sets.append(sample.chain.type_set)
            if not rows:
                raise CalibrationError("Calibration split is empty")

            thresholds = {}
            for name, (effect, _) in FEATURES.items():
                values = np.array([row[name] for row in rows])
                labels = np.array([effect in types for types in type_sets])
                thresholds[name] = fit_threshold(name, effect, values, labels)
                logfire.debug(
                    "fitted {feature}",
                    feature=name,
                    threshold=thresholds[name].threshold,
                    f1=thresholds[name].f1,
                )
        return cls(thresholds)

    def save(self, path: Path) -> None:
        """Persist thresholds as a JSON sidecar keyed by feature name."""
        payload = {name: rule.model_dump(mode="json") for name, rule in self.thresholds.items()}
        try:
            path.write_text(json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")
        except OSError as e:
            raise AudioIOError(path, f"Cannot write thresholds {path}: {e}") from e

    @classmethod
    def load(cls, path: Path) -> "HeuristicPredictor":
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
        except OSError as e:
            raise AudioIOError(path, f"Cannot read thresholds {path}: {e}") from e
        except json.JSONDecodeError as e:
            raise CalibrationError(f"Thresholds file {path} is not valid JSON: {e}") from e
        return cls({name: FeatureThreshold.model_validate(rule) for name, rule in payload.items()})

    def detect(self, wet: AudioBuffer) -> frozenset[EffectType]:
        """Effect types whose selected feature fires."""
        features = extract_features(wet)
        return frozenset(
            effect for effect, rule in self.selected.items() if rule.fires(features[rule.feature])
        )

    def predict_direct(self, wet: AudioBuffer) -> DirectPrediction:
        return DirectPrediction(types=self.detect(wet), dry_estimate=wet)

    def predict_last(self, wet: AudioBuffer) -> LastPrediction:
        raise PredictorError(
            "Heuristic predictor only supports the direct contract",
            details={"predictor": self.name},
        )


def heuristic_predictor(calibration_split: Iterable[CalibrationSample]) -> HeuristicPredictor:
    """Calibrate a heuristic predictor on a labelled split."""
    return HeuristicPredictor.calibrate(calibration_split)
