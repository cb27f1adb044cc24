"""
Synthetic plucked-string dry tracks (Karplus-Strong).

Used as the desk-scale corpus so the pipeline runs without external audio.
Each track is a seeded sequence of plucked notes in the guitar range with
gaps between notes.
"""

import numpy as np
from scipy.signal import lfilter

from fxsearch.models.audio import SAMPLE_RATE, AudioBuffer

TRACK_SECONDS = 10.0
LOWEST_MIDI = 40  # E2
HIGHEST_MIDI = 76  # E5


def midi_to_hz(note: int) -> float:
    return 440.0 * 2.0 ** ((note - 69) / 12.0)


def pluck(frequency: float, num_samples: int, rng: np.random.Generator, decay: float = 0.996) -> np.ndarray:
    """
    One Karplus-Strong note.

    y[n] = x[n] + decay/2 * (y[n - P] + y[n - P - 1]), excited by a
    P-sample noise burst.
    """
    period = max(2, int(round(SAMPLE_RATE / frequency)))
    excitation = np.zeros(num_samples)
    excitation[: min(period, num_samples)] = rng.uniform(-1.0, 1.0, min(period, num_samples))
    a = np.zeros(period + 2)
    a[0] = 1.0
    a[period] = -0.5 * decay
    a[period + 1] = -0.5 * decay
    return lfilter([1.0], a, excitation)


def synthetic_track(seed: int, seconds: float = TRACK_SECONDS) -> AudioBuffer:
    """
    Render one seeded plucked-string track.

    Args:
        seed: Track seed
        seconds: Track duration

    Returns:
        Track at 44.1 kHz (not level-normalized)
    """
    rng = np.random.default_rng(seed)
    total = int(round(seconds * SAMPLE_RATE))
    out = np.zeros(total)

    t = 0.05
    while t < seconds - 0.3:
        start = int(t * SAMPLE_RATE)
        held = rng.uniform(0.25, 1.2)
        release = 0.08
        length = min(total - start, int((held + release) * SAMPLE_RATE))
        note = int(rng.integers(LOWEST_MIDI, HIGHEST_MIDI + 1))
        velocity = rng.uniform(0.4, 1.0)

        tone = pluck(midi_to_hz(note), length, rng)
        envelope = np.ones(length)
        held_samples = min(length, int(held * SAMPLE_RATE))
        tail = length - held_samples
        if tail > 0:
            envelope[held_samples:] = np.exp(-np.arange(tail) / (0.015 * SAMPLE_RATE))
        out[start : start + length] += velocity * tone * envelope

        t += held + release + rng.uniform(0.05, 0.6)

    peak = float(np.max(np.abs(out)))
    if peak > 0:
        out = 0.5 * out / peak
    return AudioBuffer(samples=out)


def synthetic_tracks(count: int, seed: int) -> list[tuple[str, AudioBuffer]]:
    """Generate count named tracks; track i uses a seed derived from (seed, i)."""
    tracks = []
    for i in range(count):
        track_seed = int(np.random.SeedSequence([seed, i]).generate_state(1)[0])
        tracks.append((f"synth{i:03d}", synthetic_track(track_seed)))
    return tracks
