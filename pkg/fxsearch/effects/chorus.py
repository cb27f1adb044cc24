"""
Chorus: LFO-modulated fractional delay with feedback.

The LFO rate and centre delay are fixed; only depth, feedback and mix are
variable.
"""

import numpy as np

from fxsearch.effects.base import ModulatedDelayLine, expect_type
from fxsearch.models.audio import AudioBuffer
from fxsearch.models.params import EffectParams, EffectType

CENTRE_DELAY_MS = 7.0
RATE_HZ = 1.0
# Keeps the read pointer strictly behind the write pointer at full depth
MODULATION_SCALE = 0.9


def chorus_delays(num_samples: int, depth: float, sample_rate: int) -> np.ndarray:
    """
    Delay in samples for every output sample.

    D(n) = (fs / 1000) * (c + a * sin(2 pi rate n / fs)), a = depth * c * 0.9 ms.
    """
    amplitude_ms = depth * CENTRE_DELAY_MS * MODULATION_SCALE
    t = np.arange(num_samples, dtype=np.float64) / sample_rate
    delay_ms = CENTRE_DELAY_MS + amplitude_ms * np.sin(2.0 * np.pi * RATE_HZ * t)
    return sample_rate / 1000.0 * delay_ms


def apply_chorus(buf: AudioBuffer, params: EffectParams) -> AudioBuffer:
    """
    Apply the chorus.

    y[n] = (1 - mix) * x[n] + mix * w^[n - D(n)]

    Args:
        buf: Input signal
        params: Chorus parameters (depth, feedback, mix)

    Returns:
        Processed signal

    Raises:
        TypeMismatchError: If params are not Chorus parameters
    """
    expect_type(params, EffectType.CHORUS)
    depth, feedback, mix = params.raw()
    x = buf.samples

    line = ModulatedDelayLine(chorus_delays(x.shape[0], depth, buf.sample_rate), feedback)
    delayed = line.read(x)
    return buf.with_samples((1.0 - mix) * x + mix * delayed)
