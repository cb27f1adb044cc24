"""
Signal similarity metrics.

SI-SDR is the search objective; MR-STFT is used for evaluation only.
"""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.signal import stft

from fxsearch.exceptions import DimensionError, SilentSignalError, ValidationError
from fxsearch.models.audio import AudioBuffer

SI_SDR_CAP_DB = 300.0
RESIDUAL_FLOOR = 1e-30
LOG_EPS = 1e-7


def _check_lengths(estimate: AudioBuffer, reference: AudioBuffer) -> None:
    if len(estimate) != len(reference):
        raise DimensionError(
            f"Length mismatch: estimate {len(estimate)} vs reference {len(reference)}",
            details={"estimate": len(estimate), "reference": len(reference)},
        )


def si_sdr(estimate: AudioBuffer, reference: AudioBuffer) -> float:
    """
    Scale-invariant signal-to-distortion ratio in dB.

    Args:
        estimate: Estimated signal
        reference: Reference signal

    Returns:
        10 log10(|s_t|^2 / |e - s_t|^2), capped at +300 dB (and floored at
        -300 dB when the estimate is orthogonal to the reference)

    Raises:
        DimensionError: If lengths differ
        SilentSignalError: If the reference has zero energy
    """
    _check_lengths(estimate, reference)
    est = estimate.samples
    ref = reference.samples

    ref_energy = float(np.dot(ref, ref))
    if ref_energy <= RESIDUAL_FLOOR:
        raise SilentSignalError("SI-SDR reference is silent", rms=reference.rms())

    alpha = float(np.dot(est, ref)) / ref_energy
    target = alpha * ref
    residual = est - target
    residual_energy = float(np.dot(residual, residual))
    target_energy = float(np.dot(target, target))

    if residual_energy < RESIDUAL_FLOOR:
        return SI_SDR_CAP_DB
    if target_energy < RESIDUAL_FLOOR:
        return -SI_SDR_CAP_DB
    value = 10.0 * np.log10(target_energy / residual_energy)
    return float(min(SI_SDR_CAP_DB, max(-SI_SDR_CAP_DB, value)))


class StftConfig(BaseModel):
    """Resolutions of the multi-resolution STFT distance (Hann window, hop = fft / 4)."""

    model_config = ConfigDict(frozen=True)

    fft_sizes: tuple[int, ...] = Field(default=(512, 1024, 2048))
    hop_divisor: int = Field(default=4)

    @model_validator(mode="after")
    def check_resolutions(self) -> "StftConfig":
        if not self.fft_sizes:
            raise ValidationError("StftConfig needs at least one resolution")
        if list(self.fft_sizes) != sorted(self.fft_sizes):
            raise ValidationError("STFT resolutions must be sorted ascending")
        for size in self.fft_sizes:
            if size % self.hop_divisor != 0:
                raise ValidationError(
                    f"Hop must divide fft size {size}", details={"fft": size}
                )
        return self

    def hop(self, fft_size: int) -> int:
        return fft_size // self.hop_divisor


DEFAULT_STFT = StftConfig()


def _magnitude(x: np.ndarray, fft_size: int, hop: int) -> np.ndarray:
    _, _, spec = stft(
        x,
        window="hann",
        nperseg=fft_size,
        noverlap=fft_size - hop,
        boundary=None,
        padded=False,
    )
    return np.abs(spec)


def mr_stft(
    estimate: AudioBuffer, reference: AudioBuffer, cfg: StftConfig = DEFAULT_STFT
) -> float:
    """
    Multi-resolution STFT distance.

    Mean over resolutions of spectral convergence plus mean absolute
    log-magnitude difference.

    Raises:
        DimensionError: If lengths differ or are shorter than the largest FFT
        SilentSignalError: If the reference spectrum is all zero
    """
    _check_lengths(estimate, reference)
    largest = cfg.fft_sizes[-1]
    if len(reference) < largest:
        raise DimensionError(
            f"Signals of length {len(reference)} are shorter than fft size {largest}",
            details={"length": len(reference), "fft": largest},
        )

    total = 0.0
    for fft_size in cfg.fft_sizes:
        hop = cfg.hop(fft_size)
        ref_mag = _magnitude(reference.samples, fft_size, hop)
        est_mag = _magnitude(estimate.samples, fft_size, hop)

        ref_norm = float(np.linalg.norm(ref_mag))
        if ref_norm <= RESIDUAL_FLOOR:
            raise SilentSignalError("MR-STFT reference is silent", rms=reference.rms())

        convergence = float(np.linalg.norm(ref_mag - est_mag)) / ref_norm
        log_distance = float(np.mean(np.abs(np.log(ref_mag + LOG_EPS) - np.log(est_mag + LOG_EPS))))
        total += convergence + log_distance

    return total / len(cfg.fft_sizes)
