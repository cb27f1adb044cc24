"""
Mono audio buffers and level utilities.

Every signal in the pipeline (dry, intermediate, wet, dry estimate and
reconstruction) is an AudioBuffer at 44.1 kHz.
"""

from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field, field_validator

from fxsearch.exceptions import IngestionError, SilentSignalError, ValidationError

SAMPLE_RATE = 44100
TARGET_RMS = 0.1
SILENCE_RMS = 1e-12


class AudioBuffer(BaseModel):
    """
    Immutable mono sample sequence.

    Samples are held as a read-only float64 array. Values are nominally in
    [-1, 1] but only finiteness is enforced; use clip() to bound them.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    samples: NDArray[np.float64] = Field(description="Mono samples, unitless amplitude")
    sample_rate: int = Field(default=SAMPLE_RATE, description="Sample rate in Hz")

    @field_validator("samples", mode="before")
    @classmethod
    def validate_samples(cls, v: Any) -> NDArray[np.float64]:
        """Convert to a finite, read-only 1-D float64 array."""
        arr = np.array(v, dtype=np.float64, copy=True)
        if arr.ndim != 1:
            raise ValidationError(
                "AudioBuffer samples must be one-dimensional (mono)",
                details={"shape": arr.shape},
            )
        if not np.all(np.isfinite(arr)):
            raise ValidationError("AudioBuffer samples must be finite (no NaN/Inf)")
        arr.setflags(write=False)
        return arr

    @field_validator("sample_rate")
    @classmethod
    def validate_sample_rate(cls, v: int) -> int:
        """Only 44.1 kHz is supported; resampling is out of scope."""
        if v != SAMPLE_RATE:
            raise IngestionError(
                f"Unsupported sample rate {v} Hz (expected {SAMPLE_RATE})",
                details={"sample_rate": v},
            )
        return v

    @classmethod
    def from_array(cls, samples: ArrayLike) -> "AudioBuffer":
        """Build a 44.1 kHz buffer from any array-like."""
        return cls(samples=samples)

    @classmethod
    def silence(cls, num_samples: int) -> "AudioBuffer":
        """Build an all-zero buffer."""
        return cls(samples=np.zeros(num_samples))

    def __len__(self) -> int:
        return int(self.samples.shape[0])

    @property
    def duration(self) -> float:
        """Duration in seconds."""
        return len(self) / self.sample_rate

    def rms(self) -> float:
        """Root mean square over the whole buffer."""
        if len(self) == 0:
            return 0.0
        return float(np.sqrt(np.mean(np.square(self.samples))))

    def peak(self) -> float:
        """Maximum absolute sample value."""
        if len(self) == 0:
            return 0.0
        return float(np.max(np.abs(self.samples)))

    def is_silent(self, threshold: float = SILENCE_RMS) -> bool:
        """Check whether the RMS is at or below threshold."""
        return self.rms() <= threshold

    def with_samples(self, samples: ArrayLike) -> "AudioBuffer":
        """New buffer with the same sample rate and different samples."""
        return AudioBuffer(samples=samples, sample_rate=self.sample_rate)

    def equals(self, other: "AudioBuffer") -> bool:
        """Bit-exact comparison of sample content."""
        return self.sample_rate == other.sample_rate and np.array_equal(
            self.samples, other.samples
        )


def rms_normalize(buf: AudioBuffer, target_rms: float = TARGET_RMS) -> AudioBuffer:
    """
    Scale a buffer so its RMS equals target_rms.

    Args:
        buf: Input buffer
        target_rms: Desired RMS level

    Returns:
        Scaled buffer

    Raises:
        SilentSignalError: If the input RMS is at or below 1e-12
    """
    level = buf.rms()
    if level <= SILENCE_RMS:
        raise SilentSignalError("Cannot RMS-normalize a silent signal", rms=level)
    return buf.with_samples(buf.samples * (target_rms / level))


def clip(buf: AudioBuffer) -> AudioBuffer:
    """Clamp every sample to [-1.0, 1.0]."""
    return buf.with_samples(np.clip(buf.samples, -1.0, 1.0))


def quantize_float32(buf: AudioBuffer) -> AudioBuffer:
    """Round samples to float32 precision, the storage resolution of WAV files."""
    return buf.with_samples(buf.samples.astype(np.float32).astype(np.float64))
