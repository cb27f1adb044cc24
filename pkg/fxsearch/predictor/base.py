"""
Predictor contract for the prediction stage.

A predictor answers one or both of:
- predict_direct(wet): unordered type combination plus a dry estimate
- predict_last(wet): last-applied type (or the None class), optionally its
  parameters, plus the bypass estimate
"""

from abc import ABC, abstractmethod

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from fxsearch.exceptions import PredictorError
from fxsearch.models.audio import AudioBuffer
from fxsearch.models.chain import MAX_CHAIN_LENGTH
from fxsearch.models.params import EffectParams, EffectType, PredictedType, StopClass
from fxsearch.models.results import SearchMode


class DirectPrediction(BaseModel):
    """Output of predict_direct."""

    model_config = ConfigDict(frozen=True)

    types: frozenset[EffectType] = Field(description="Unordered type combination")
    dry_estimate: AudioBuffer = Field(description="Estimated dry signal")

    @field_validator("types")
    @classmethod
    def check_size(cls, v: frozenset[EffectType]) -> frozenset[EffectType]:
        if len(v) > MAX_CHAIN_LENGTH:
            raise PredictorError(
                f"predict_direct returned {len(v)} types (max {MAX_CHAIN_LENGTH})",
                details={"types": sorted(t.value for t in v)},
            )
        return v


class LastPrediction(BaseModel):
    """Output of predict_last."""

    model_config = ConfigDict(frozen=True)

    effect: PredictedType = Field(description="Last-applied type or the None class")
    params: EffectParams | None = Field(default=None, description="Predicted parameters")
    bypass: AudioBuffer = Field(description="Signal before the last-applied effect")

    @property
    def is_stop(self) -> bool:
        return self.effect is StopClass.NONE

    @model_validator(mode="after")
    def check_params(self) -> "LastPrediction":
        if self.params is not None:
            if self.is_stop:
                raise PredictorError("None-class prediction must not carry parameters")
            if self.params.effect_type is not self.effect:
                raise PredictorError(
                    "Predicted parameters do not match the predicted type",
                    details={"type": self.effect.value, "params": self.params.effect_type.value},
                )
        return self


class Predictor(ABC):
    """
    Base class for prediction-stage stand-ins.

    Subclasses declare which entry points they implement.
    """

    name: str = "predictor"
    supports_direct: bool = False
    supports_last: bool = False
    predicts_params: bool = False

    def supports(self, mode: SearchMode) -> bool:
        """Whether this predictor can drive the given search mode."""
        if mode is SearchMode.DRY_TYPE_DIRECT:
            return self.supports_direct
        if mode is SearchMode.BYPASS_TYPE_ITER:
            return self.supports_last
        return self.supports_last and self.predicts_params

    def require(self, mode: SearchMode) -> None:
        """
        Raises:
            PredictorError: If the mode's contract is not supported
        """
        if not self.supports(mode):
            raise PredictorError(
                f"Predictor '{self.name}' does not support mode '{mode.value}'",
                details={"predictor": self.name, "mode": mode.value},
            )

    @abstractmethod
    def predict_direct(self, wet: AudioBuffer) -> DirectPrediction:
        """Predict the unordered type combination and the dry signal."""

    @abstractmethod
    def predict_last(self, wet: AudioBuffer) -> LastPrediction:
        """Predict the last-applied effect and the bypass signal."""
