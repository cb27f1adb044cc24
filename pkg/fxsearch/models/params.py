"""
Effect types and their parameters.

The parameter registry is the single source of truth for every variable
parameter's name and range; effects, search and dataset generation all
query it through parameter_specs().
"""

from collections.abc import Sequence
from enum import Enum
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from fxsearch.exceptions import DimensionError, ParameterRangeError, ValidationError

# Relative slack accepted on raw values before they count as out of range
RANGE_TOLERANCE = 1e-9


class EffectType(str, Enum):
    """The three effect types that can appear in a chain."""

    CHORUS = "Chorus"
    DISTORTION = "Distortion"
    REVERB = "Reverb"

    @property
    def short(self) -> str:
        """One-letter code (C, D, R)."""
        return self.value[0]

    @classmethod
    def from_short(cls, code: str) -> "EffectType":
        """Look up an effect type by its one-letter code or full name."""
        for member in cls:
            if code.upper() == member.short or code.lower() == member.value.lower():
                return member
        raise ValidationError(f"Unknown effect type: {code}")


class StopClass(str, Enum):
    """
    Sentinel emitted by predictors when no further effect is detected.

    Never appears inside a ChainConfig.
    """

    NONE = "None"


NONE_CLASS = StopClass.NONE

PredictedType = EffectType | StopClass


class ParameterSpec(BaseModel):
    """Name and range of one variable effect parameter."""

    model_config = ConfigDict(frozen=True)

    name: str = Field(description="Parameter name as used by the effect")
    low: float = Field(description="Lower bound in raw units")
    high: float = Field(description="Upper bound in raw units")

    @property
    def span(self) -> float:
        return self.high - self.low

    def normalize(self, raw: float) -> float:
        """Affine map of a raw value into [0, 1]."""
        slack = RANGE_TOLERANCE * self.span
        if not (self.low - slack <= raw <= self.high + slack):
            raise ParameterRangeError(self.name, raw, self.low, self.high)
        return min(1.0, max(0.0, (raw - self.low) / self.span))

    def denormalize(self, value: float) -> float:
        """Affine map of a normalized value back to raw units."""
        return self.low + value * self.span


PARAMETER_REGISTRY: dict[EffectType, tuple[ParameterSpec, ...]] = {
    EffectType.CHORUS: (
        ParameterSpec(name="depth", low=0.1, high=0.3),
        ParameterSpec(name="feedback", low=0.0, high=0.5),
        ParameterSpec(name="mix", low=0.3, high=0.7),
    ),
    EffectType.DISTORTION: (ParameterSpec(name="drive_db", low=10.0, high=20.0),),
    EffectType.REVERB: (
        ParameterSpec(name="room_size", low=0.1, high=0.7),
        ParameterSpec(name="damping", low=0.1, high=0.9),
        ParameterSpec(name="wet_level", low=0.1, high=0.4),
    ),
}


def parameter_specs(effect_type: EffectType) -> tuple[ParameterSpec, ...]:
    """
    Get the variable parameters of an effect type.

    Args:
        effect_type: Effect type to look up

    Returns:
        Ordered parameter specs; their order defines vector layout
    """
    return PARAMETER_REGISTRY[EffectType(effect_type)]


def dimension(effect_type: EffectType) -> int:
    """Number of variable parameters of an effect type."""
    return len(parameter_specs(effect_type))


class EffectParams(BaseModel):
    """
    Normalized parameter vector of a single effect.

    Serializes as {"type": ..., "params_norm": [...], "params_raw": [...]}.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    effect_type: EffectType = Field(alias="type", description="Effect type")
    values: tuple[float, ...] = Field(
        alias="params_norm", description="Normalized parameter values in [0, 1]"
    )

    @field_validator("values", mode="before")
    @classmethod
    def coerce_values(cls, v: Any) -> tuple[float, ...]:
        """Accept any sequence of numbers."""
        return tuple(float(x) for x in v)

    @model_validator(mode="after")
    def check_shape_and_range(self) -> "EffectParams":
        """Length must match the type's dimension; values must be in [0, 1]."""
        expected = dimension(self.effect_type)
        if len(self.values) != expected:
            raise DimensionError(
                f"{self.effect_type.value} expects {expected} parameters, got {len(self.values)}",
                details={"type": self.effect_type.value, "length": len(self.values)},
            )
        for spec, value in zip(parameter_specs(self.effect_type), self.values, strict=True):
            if not 0.0 <= value <= 1.0:
                raise ParameterRangeError(spec.name, value, 0.0, 1.0)
        return self

    @classmethod
    def midpoint(cls, effect_type: EffectType) -> "EffectParams":
        """Parameters at the centre of every range."""
        return cls(type=effect_type, params_norm=[0.5] * dimension(effect_type))

    def raw(self) -> tuple[float, ...]:
        """Parameter values in registry units."""
        return tuple(denormalize_params(self))

    def raw_dict(self) -> dict[str, float]:
        """Raw values keyed by parameter name."""
        return {
            spec.name: value
            for spec, value in zip(parameter_specs(self.effect_type), self.raw(), strict=True)
        }

    def to_json_dict(self) -> dict[str, Any]:
        """Canonical stage record with both normalized and raw values."""
        return {
            "type": self.effect_type.value,
            "params_norm": list(self.values),
            "params_raw": list(self.raw()),
        }


def normalize_params(effect_type: EffectType, raw: Sequence[float]) -> EffectParams:
    """
    Map raw parameter values into normalized EffectParams.

    Args:
        effect_type: Effect type the values belong to
        raw: Values in registry units, in registry order

    Returns:
        EffectParams with each value mapped to (raw - low) / (high - low)

    Raises:
        DimensionError: If the vector length does not match the type
        ParameterRangeError: If a value lies outside its range
    """
    specs = parameter_specs(effect_type)
    if len(raw) != len(specs):
        raise DimensionError(
            f"{EffectType(effect_type).value} expects {len(specs)} raw values, got {len(raw)}",
            details={"type": EffectType(effect_type).value, "length": len(raw)},
        )
    values = [spec.normalize(float(x)) for spec, x in zip(specs, raw, strict=True)]
    return EffectParams(type=effect_type, params_norm=values)


def denormalize_params(params: EffectParams) -> list[float]:
    """Map normalized parameters back to registry units."""
    return [
        spec.denormalize(value)
        for spec, value in zip(parameter_specs(params.effect_type), params.values, strict=True)
    ]
