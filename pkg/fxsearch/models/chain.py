"""
Effect chain configuration.

A chain is the ordered cascade of effects applied to a dry signal. The
empty chain (N = 0) is valid and renders as the identity pipeline.
"""

import json
from collections.abc import Sequence
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator

from fxsearch.exceptions import DimensionError, ValidationError
from fxsearch.models.params import EffectParams, EffectType, dimension

MAX_CHAIN_LENGTH = 3


class ChainConfig(BaseModel):
    """
    Ordered sequence of effect configurations.

    Ground-truth chains never repeat a type; check has_distinct_types when
    that matters. Estimated chains from an untrusted predictor may repeat.
    """

    model_config = ConfigDict(frozen=True)

    stages: tuple[EffectParams, ...] = Field(
        default_factory=tuple, description="Effects in application order"
    )

    @field_validator("stages")
    @classmethod
    def validate_length(cls, v: tuple[EffectParams, ...]) -> tuple[EffectParams, ...]:
        """Chains hold at most three effects."""
        if len(v) > MAX_CHAIN_LENGTH:
            raise ValidationError(
                f"Chain length {len(v)} exceeds {MAX_CHAIN_LENGTH}",
                details={"length": len(v)},
            )
        return v

    @classmethod
    def empty(cls) -> "ChainConfig":
        return cls(stages=())

    @classmethod
    def distinct(cls, stages: Sequence[EffectParams]) -> "ChainConfig":
        """
        Build a chain that must not repeat effect types.

        Raises:
            ValidationError: If two stages share a type
        """
        chain = cls(stages=tuple(stages))
        if not chain.has_distinct_types:
            raise ValidationError(
                "Chain stages must have pairwise distinct types",
                details={"types": [t.value for t in chain.types]},
            )
        return chain

    @classmethod
    def from_vector(cls, types: Sequence[EffectType], vector: Sequence[float]) -> "ChainConfig":
        """
        Split a concatenated normalized vector into per-stage parameters.

        Args:
            types: Stage types in order
            vector: Concatenated normalized parameters of all stages

        Returns:
            Chain with one stage per type
        """
        total = sum(dimension(t) for t in types)
        if len(vector) != total:
            raise DimensionError(
                f"Vector of length {len(vector)} does not match chain dimension {total}",
                details={"types": [EffectType(t).value for t in types]},
            )
        stages = []
        offset = 0
        for effect_type in types:
            d = dimension(effect_type)
            values = [min(1.0, max(0.0, float(x))) for x in vector[offset : offset + d]]
            stages.append(EffectParams(type=effect_type, params_norm=values))
            offset += d
        return cls(stages=tuple(stages))

    def __len__(self) -> int:
        return len(self.stages)

    @property
    def length(self) -> int:
        """Chain length N."""
        return len(self.stages)

    @property
    def is_empty(self) -> bool:
        return not self.stages

    @property
    def types(self) -> tuple[EffectType, ...]:
        """Effect types in application order."""
        return tuple(stage.effect_type for stage in self.stages)

    @property
    def type_set(self) -> frozenset[EffectType]:
        """Unordered combination of effect types."""
        return frozenset(self.types)

    @property
    def has_distinct_types(self) -> bool:
        return len(set(self.types)) == len(self.types)

    @property
    def dimension(self) -> int:
        """Total number of searchable parameters."""
        return sum(dimension(t) for t in self.types)

    def vector(self) -> list[float]:
        """Concatenated normalized parameters of all stages."""
        return [value for stage in self.stages for value in stage.values]

    def prefix(self, n: int) -> "ChainConfig":
        """The first n stages."""
        return ChainConfig(stages=self.stages[:n])

    def describe(self) -> str:
        """Short form such as 'D>R' (empty chain is '-')."""
        return ">".join(t.short for t in self.types) or "-"

    def to_json_dict(self) -> dict[str, Any]:
        """Canonical JSON object {"stages": [...]}."""
        return {"stages": [stage.to_json_dict() for stage in self.stages]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, data: dict[str, Any]) -> "ChainConfig":
        """
        Parse the canonical JSON object.

        Normalized values are authoritative; params_raw is informational.
        """
        try:
            stages = tuple(
                EffectParams(type=stage["type"], params_norm=stage["params_norm"])
                for stage in data.get("stages", [])
            )
        except (KeyError, TypeError) as e:
            raise ValidationError(f"Malformed chain JSON: {e}") from e
        return cls(stages=stages)

    @classmethod
    def from_json(cls, text: str) -> "ChainConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ValidationError(f"Chain JSON is not valid JSON: {e}") from e
        return cls.from_json_dict(data)
