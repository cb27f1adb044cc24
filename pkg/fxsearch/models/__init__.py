"""Domain models for fxsearch."""

from fxsearch.models.audio import (
    SAMPLE_RATE,
    TARGET_RMS,
    AudioBuffer,
    clip,
    quantize_float32,
    rms_normalize,
)
from fxsearch.models.chain import MAX_CHAIN_LENGTH, ChainConfig
from fxsearch.models.manifest import Manifest, ManifestEntry, Split
from fxsearch.models.params import (
    NONE_CLASS,
    PARAMETER_REGISTRY,
    EffectParams,
    EffectType,
    ParameterSpec,
    PredictedType,
    StopClass,
    denormalize_params,
    dimension,
    normalize_params,
    parameter_specs,
)
from fxsearch.models.results import (
    EstimationResult,
    SearchBudget,
    SearchMode,
    StoredResult,
    TrialRecord,
    budget_trials,
)

__all__ = [
    # Audio
    "SAMPLE_RATE",
    "TARGET_RMS",
    "AudioBuffer",
    "clip",
    "quantize_float32",
    "rms_normalize",
    # Parameters
    "NONE_CLASS",
    "PARAMETER_REGISTRY",
    "EffectParams",
    "EffectType",
    "ParameterSpec",
    "PredictedType",
    "StopClass",
    "denormalize_params",
    "dimension",
    "normalize_params",
    "parameter_specs",
    # Chains
    "MAX_CHAIN_LENGTH",
    "ChainConfig",
    # Manifest
    "Manifest",
    "ManifestEntry",
    "Split",
    # Search results
    "EstimationResult",
    "SearchBudget",
    "SearchMode",
    "StoredResult",
    "TrialRecord",
    "budget_trials",
]
