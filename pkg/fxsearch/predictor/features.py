"""
Hand-crafted effect detection features.

Each feature maps a signal to one scalar and is tied to the effect type it
is meant to reveal.
"""

from collections.abc import Callable

import numpy as np
from scipy.signal import stft

from fxsearch.models.audio import AudioBuffer
from fxsearch.models.params import EffectType

FRAME = 1024
HOP = 512
ENVELOPE_FRAME = 441  # 10 ms
EPS = 1e-12


def crest_factor(buf: AudioBuffer) -> float:
    """Peak over RMS; saturation lowers it."""
    rms = buf.rms()
    return buf.peak() / rms if rms > EPS else 0.0


def saturation_ratio(buf: AudioBuffer) -> float:
    """Fraction of samples above 70 % of the peak; flat-topped waveforms score high."""
    peak = buf.peak()
    if peak <= EPS:
        return 0.0
    return float(np.mean(np.abs(buf.samples) >= 0.7 * peak))


def odd_harmonic_ratio(buf: AudioBuffer) -> float:
    """
    Energy above 4 kHz relative to total energy.

    Odd-order waveshaping spreads energy into high harmonics of guitar
    partials.
    """
    spectrum = np.abs(np.fft.rfft(buf.samples)) ** 2
    freqs = np.fft.rfftfreq(len(buf), 1.0 / buf.sample_rate)
    total = float(spectrum.sum())
    return float(spectrum[freqs >= 4000.0].sum()) / total if total > EPS else 0.0


def _envelope_db(buf: AudioBuffer) -> np.ndarray:
    usable = (len(buf) // ENVELOPE_FRAME) * ENVELOPE_FRAME
    frames = buf.samples[:usable].reshape(-1, ENVELOPE_FRAME)
    energy = np.mean(frames**2, axis=1)
    return 10.0 * np.log10(energy + EPS)


def envelope_floor_db(buf: AudioBuffer) -> float:
    """
    Level of the quietest envelope frames relative to the median, in dB.

    Reverb tails fill the gaps after note offsets and raise this floor.
    """
    env = _envelope_db(buf)
    if env.size == 0:
        return 0.0
    return float(np.percentile(env, 10) - np.median(env))


def envelope_autocorrelation(buf: AudioBuffer, lag_frames: int = 5) -> float:
    """Normalized autocorrelation of the dB envelope at a 50 ms lag; decay tails smooth it."""
    env = _envelope_db(buf)
    if env.size <= lag_frames + 1:
        return 0.0
    centred = env - env.mean()
    denominator = float(np.dot(centred, centred))
    if denominator <= EPS:
        return 0.0
    return float(np.dot(centred[:-lag_frames], centred[lag_frames:]) / denominator)


def lfo_modulation(buf: AudioBuffer, rate_hz: float = 1.0) -> float:
    """
    Spectral-flux modulation at the chorus LFO rate.

    Ratio of the flux spectrum power within 0.8 to 1.2 times rate_hz to
    the power in the surrounding 0.3 to 3 Hz band.
    """
    if len(buf) < 4 * FRAME:
        return 0.0
    _, _, spec = stft(buf.samples, nperseg=FRAME, noverlap=FRAME - HOP, boundary=None, padded=False)
    mag = np.abs(spec)
    flux = np.sqrt(np.sum(np.diff(mag, axis=1).clip(min=0.0) ** 2, axis=0))
    flux = flux - flux.mean()
    frame_rate = buf.sample_rate / HOP
    power = np.abs(np.fft.rfft(flux)) ** 2
    freqs = np.fft.rfftfreq(flux.size, 1.0 / frame_rate)
    band = (freqs >= 0.8 * rate_hz) & (freqs <= 1.2 * rate_hz)
    context = (freqs >= 0.3) & (freqs <= 3.0)
    total = float(power[context].sum())
    return float(power[band].sum()) / total if total > EPS else 0.0


FeatureFn = Callable[[AudioBuffer], float]

# name -> (effect revealed, function)
FEATURES: dict[str, tuple[EffectType, FeatureFn]] = {
    "crest_factor": (EffectType.DISTORTION, crest_factor),
    "saturation_ratio": (EffectType.DISTORTION, saturation_ratio),
    "odd_harmonic_ratio": (EffectType.DISTORTION, odd_harmonic_ratio),
    "envelope_floor_db": (EffectType.REVERB, envelope_floor_db),
    "envelope_autocorrelation": (EffectType.REVERB, envelope_autocorrelation),
    "lfo_modulation": (EffectType.CHORUS, lfo_modulation),
}


def extract_features(buf: AudioBuffer) -> dict[str, float]:
    """Compute every registered feature."""
    return {name: fn(buf) for name, (_, fn) in FEATURES.items()}
