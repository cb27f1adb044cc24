"""
Shared helpers and delay-line state for the effect renderers.

Every state object is created fresh inside an apply call, so rendering is a
pure function of (input, params). Recursive filters are evaluated in blocks
no longer than their shortest feedback delay, which keeps the recursion
exact while letting numpy process each block at once.
"""

import numpy as np
from numpy.typing import NDArray
from scipy.signal import lfilter

from fxsearch.exceptions import TypeMismatchError
from fxsearch.models.params import EffectParams, EffectType

FloatArray = NDArray[np.float64]


def expect_type(params: EffectParams, effect_type: EffectType) -> None:
    """
    Check that params belong to the expected effect.

    Raises:
        TypeMismatchError: If the type differs
    """
    if params.effect_type is not effect_type:
        raise TypeMismatchError(
            f"Expected {effect_type.value} parameters, got {params.effect_type.value}",
            details={"expected": effect_type.value, "actual": params.effect_type.value},
        )


class CombFilter:
    """
    Feedback comb filter with a one-pole lowpass in the loop (Freeverb comb).

    out[n] = in[n - D] + feedback * lp[n - D]
    lp[n]  = (1 - damp) * out[n] + damp * lp[n - 1]
    """

    def __init__(self, delay: int, feedback: float, damp: float):
        self.delay = delay
        self.feedback = feedback
        self.damp = damp

    def process(self, x: FloatArray) -> FloatArray:
        n = x.shape[0]
        d = self.delay
        out = np.zeros(n)
        store = np.zeros(n)
        zi = np.zeros(1)
        b = [1.0 - self.damp]
        a = [1.0, -self.damp]

        for start in range(0, n, d):
            stop = min(start + d, n)
            src = start - d
            if src >= 0:
                length = stop - start
                out[start:stop] = x[src : src + length] + self.feedback * store[src : src + length]
            store[start:stop], zi = lfilter(b, a, out[start:stop], zi=zi)

        return out


class AllpassFilter:
    """
    Schroeder allpass as used by Freeverb.

    v[n] = x[n] + g * v[n - D]
    y[n] = -x[n] + v[n - D]
    """

    def __init__(self, delay: int, gain: float):
        self.delay = delay
        self.gain = gain

    def process(self, x: FloatArray) -> FloatArray:
        n = x.shape[0]
        d = self.delay
        v = np.zeros(n)
        delayed = np.zeros(n)

        for start in range(0, n, d):
            stop = min(start + d, n)
            src = start - d
            if src >= 0:
                delayed[start:stop] = v[src : src + (stop - start)]
            v[start:stop] = x[start:stop] + self.gain * delayed[start:stop]

        return delayed - x


class ModulatedDelayLine:
    """
    Fractional delay line with a time-varying read position and feedback.

    w[n] = x[n] + feedback * w^[n - D(n)]

    where w^ is a linear interpolation between neighbouring samples. The
    delay line starts zeroed.
    """

    def __init__(self, delays: FloatArray, feedback: float):
        self.delays = delays
        self.feedback = feedback

    def read(self, x: FloatArray) -> FloatArray:
        """Return the interpolated delayed read w^[n - D(n)] for every n."""
        n = x.shape[0]
        positions = np.arange(n, dtype=np.float64) - self.delays
        base = np.floor(positions).astype(np.int64)
        frac = positions - base

        if self.feedback == 0.0:
            return self._interpolate(x, base, frac)

        # Reads reach at most base + 1 <= n - min_delay + 1, which lies in an
        # earlier block as long as the block is shorter than min_delay
        block = max(1, int(np.floor(np.min(self.delays))) - 1)
        w = np.zeros(n)
        out = np.zeros(n)
        for start in range(0, n, block):
            stop = min(start + block, n)
            tap = self._interpolate(w, base[start:stop], frac[start:stop])
            out[start:stop] = tap
            w[start:stop] = x[start:stop] + self.feedback * tap
        return out

    @staticmethod
    def _interpolate(line: FloatArray, base: NDArray[np.int64], frac: FloatArray) -> FloatArray:
        lo = np.where(base >= 0, line[np.clip(base, 0, None)], 0.0)
        hi_idx = base + 1
        hi = np.where(hi_idx >= 0, line[np.clip(hi_idx, 0, None)], 0.0)
        return (1.0 - frac) * lo + frac * hi
