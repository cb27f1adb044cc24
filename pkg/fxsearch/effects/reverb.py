"""
Reverb: mono Freeverb.

Eight parallel lowpass-feedback combs followed by four series allpasses.
Fixed settings follow the usual library defaults: dry level 0.4, freeze
off, width irrelevant in mono.
"""

import numpy as np

from fxsearch.effects.base import AllpassFilter, CombFilter, expect_type
from fxsearch.models.audio import AudioBuffer
from fxsearch.models.params import EffectParams, EffectType

COMB_DELAYS = (1116, 1188, 1277, 1356, 1422, 1491, 1557, 1617)
ALLPASS_DELAYS = (556, 441, 341, 225)
ALLPASS_GAIN = 0.5

FIXED_GAIN = 0.015
SCALE_ROOM = 0.28
OFFSET_ROOM = 0.7
SCALE_DAMP = 0.4
SCALE_WET = 3.0
SCALE_DRY = 2.0
DRY_LEVEL = 0.4


def comb_feedback(room_size: float) -> float:
    return SCALE_ROOM * room_size + OFFSET_ROOM


def reverb_tail(x: np.ndarray, room_size: float, damping: float) -> np.ndarray:
    """
    Wet path of the reverb before the wet-level gain.

    Args:
        x: Input samples
        room_size: Raw room size
        damping: Raw damping

    Returns:
        Allpass-diffused sum of the comb outputs
    """
    feedback = comb_feedback(room_size)
    damp = SCALE_DAMP * damping
    driven = FIXED_GAIN * x

    acc = np.zeros_like(x)
    for delay in COMB_DELAYS:
        acc += CombFilter(delay, feedback, damp).process(driven)

    for delay in ALLPASS_DELAYS:
        acc = AllpassFilter(delay, ALLPASS_GAIN).process(acc)

    return acc


def apply_reverb(buf: AudioBuffer, params: EffectParams) -> AudioBuffer:
    """
    Apply the reverb.

    output = 3 * wet_level * tail + 2 * 0.4 * x

    Raises:
        TypeMismatchError: If params are not Reverb parameters
    """
    expect_type(params, EffectType.REVERB)
    room_size, damping, wet_level = params.raw()
    x = buf.samples
    tail = reverb_tail(x, room_size, damping)
    return buf.with_samples(SCALE_WET * wet_level * tail + SCALE_DRY * DRY_LEVEL * x)
