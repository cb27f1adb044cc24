"""Distortion: memoryless tanh waveshaper."""

import numpy as np

from fxsearch.effects.base import expect_type
from fxsearch.models.audio import AudioBuffer
from fxsearch.models.params import EffectParams, EffectType


def drive_gain(drive_db: float) -> float:
    """Linear input gain for a drive in dB."""
    return float(10.0 ** (drive_db / 20.0))


def apply_distortion(buf: AudioBuffer, params: EffectParams) -> AudioBuffer:
    """
    Apply y[n] = tanh(g * x[n]) with g = 10 ** (drive_db / 20).

    Args:
        buf: Input signal
        params: Distortion parameters

    Returns:
        Distorted signal

    Raises:
        TypeMismatchError: If params are not Distortion parameters
    """
    expect_type(params, EffectType.DISTORTION)
    (drive_db,) = params.raw()
    return buf.with_samples(np.tanh(drive_gain(drive_db) * buf.samples))
