"""
Custom exceptions for fxsearch.

Provides structured error handling for rendering, search, dataset and evaluation.
Every error carries a CLI exit code so the command line can map failures
without inspecting messages.
"""

from pathlib import Path
from typing import Any

EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_INVARIANT = 4


class FXSearchException(Exception):
    """
    Base exception for all fxsearch errors.

    All custom exceptions inherit from this base class.
    """

    exit_code: int = EXIT_INVARIANT

    def __init__(self, message: str, details: dict[str, Any] | None = None):
        """
        Initialize exception.

        Args:
            message: Error message
            details: Optional additional error details
        """
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def __str__(self) -> str:
        """String representation of the error."""
        if self.details:
            return f"{self.message} | Details: {self.details}"
        return self.message


class ValidationError(FXSearchException):
    """
    Input validation failed.

    Raised when:
    - A value violates a domain type invariant
    - Arguments are inconsistent with each other
    """

    exit_code = EXIT_USAGE


class ParameterRangeError(ValidationError):
    """A raw effect parameter lies outside its registered range."""

    def __init__(self, parameter: str, value: float, low: float, high: float):
        """
        Initialize range error.

        Args:
            parameter: Name of the offending parameter
            value: Value that was supplied
            low: Lower bound of the allowed range
            high: Upper bound of the allowed range
        """
        super().__init__(
            f"Parameter '{parameter}' = {value} outside range [{low}, {high}]",
            details={"parameter": parameter, "value": value, "low": low, "high": high},
        )
        self.parameter = parameter


class DimensionError(ValidationError):
    """
    Shapes or lengths do not match.

    Raised when:
    - A parameter vector has the wrong length for its effect type
    - Two signals compared by a metric differ in length
    - A signal is shorter than the largest STFT frame
    """

    pass


class TypeMismatchError(ValidationError):
    """An effect or metric received parameters of the wrong effect type."""

    pass


class ArgumentError(ValidationError):
    """A scalar argument is out of its allowed domain."""

    pass


class EmptyInputError(ValidationError):
    """A metric or aggregation received no items."""

    pass


class OptimizerSelectionError(ArgumentError):
    """
    The wrong optimizer was requested for a search dimension.

    CMA-ES requires d >= 2, TPE requires d == 1.
    """

    def __init__(self, message: str, dimension: int, suggested: str):
        """
        Initialize optimizer selection error.

        Args:
            message: Error message
            dimension: Search dimension that was requested
            suggested: Name of the optimizer to use instead
        """
        super().__init__(message, details={"dimension": dimension, "use": suggested})
        self.dimension = dimension
        self.suggested = suggested


class ConfigurationError(ValidationError):
    """
    Configuration error.

    Raised when:
    - A config file line cannot be parsed
    - A setting has an invalid value
    """

    pass


class SilentSignalError(FXSearchException):
    """A signal is too quiet to be level-normalized or used as a reference."""

    exit_code = EXIT_DATA

    def __init__(self, message: str, rms: float | None = None):
        """
        Initialize silent signal error.

        Args:
            message: Error message
            rms: Measured RMS of the signal
        """
        super().__init__(message, details={"rms": rms} if rms is not None else None)
        self.rms = rms


class AudioIOError(FXSearchException):
    """Reading or writing an audio or manifest file failed."""

    exit_code = EXIT_DATA

    def __init__(self, path: str | Path, message: str | None = None):
        """
        Initialize audio I/O error.

        Args:
            path: Path of the file that failed
            message: Optional custom message
        """
        msg = message or f"I/O failure: {path}"
        super().__init__(msg, details={"path": str(path)})
        self.path = Path(path)


class IngestionError(FXSearchException):
    """
    Dry audio cannot be ingested.

    Raised when:
    - A file's sample rate is not 44.1 kHz (no resampling)
    - The ingest directory holds no audio files
    """

    exit_code = EXIT_DATA


class ManifestError(FXSearchException):
    """A manifest entry is missing data or is internally inconsistent."""

    exit_code = EXIT_DATA


class SplitError(FXSearchException):
    """Track-level split cannot be formed."""

    exit_code = EXIT_DATA


class CalibrationError(FXSearchException):
    """Heuristic predictor calibration failed."""

    exit_code = EXIT_DATA


class PredictorError(FXSearchException):
    """
    A predictor violated its contract.

    Raised when:
    - A predictor does not support the requested search mode
    - predict_direct returned more than three or repeated types
    """

    exit_code = EXIT_DATA


class InvariantViolationError(FXSearchException):
    """An internal invariant check failed."""

    exit_code = EXIT_INVARIANT
