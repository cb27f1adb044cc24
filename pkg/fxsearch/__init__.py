"""
fxsearch - search-based audio effect chain estimation

Recovers the ordered effect chain and its parameters from a wet signal and a
(possibly imperfect) prediction of the dry signal and effect types, by
black-box optimization of reconstruction similarity. Ships the corpus
generator and evaluation harness used to validate the search.
"""

__version__ = "0.1.0"

from fxsearch.effects import apply_chain, apply_chorus, apply_distortion, apply_reverb
from fxsearch.exceptions import (
    ArgumentError,
    AudioIOError,
    CalibrationError,
    ConfigurationError,
    DimensionError,
    EmptyInputError,
    FXSearchException,
    IngestionError,
    InvariantViolationError,
    ManifestError,
    OptimizerSelectionError,
    ParameterRangeError,
    PredictorError,
    SilentSignalError,
    SplitError,
    TypeMismatchError,
    ValidationError,
)
from fxsearch.metrics import mr_stft, si_sdr
from fxsearch.models import (
    AudioBuffer,
    ChainConfig,
    EffectParams,
    EffectType,
    EstimationResult,
    Manifest,
    ManifestEntry,
    SearchBudget,
    SearchMode,
)
from fxsearch.search import estimate, reconstruct, search_order_and_params, search_params

__all__ = [
    "__version__",
    # Domain types
    "AudioBuffer",
    "ChainConfig",
    "EffectParams",
    "EffectType",
    "EstimationResult",
    "Manifest",
    "ManifestEntry",
    "SearchBudget",
    "SearchMode",
    # Rendering and metrics
    "apply_chain",
    "apply_chorus",
    "apply_distortion",
    "apply_reverb",
    "mr_stft",
    "si_sdr",
    # Search
    "estimate",
    "reconstruct",
    "search_order_and_params",
    "search_params",
    # Exceptions
    "FXSearchException",
    "ValidationError",
    "ParameterRangeError",
    "DimensionError",
    "TypeMismatchError",
    "ArgumentError",
    "EmptyInputError",
    "OptimizerSelectionError",
    "ConfigurationError",
    "SilentSignalError",
    "AudioIOError",
    "IngestionError",
    "ManifestError",
    "SplitError",
    "CalibrationError",
    "PredictorError",
    "InvariantViolationError",
]
