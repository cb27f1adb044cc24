"""
WAV I/O: mono, 44.1 kHz, IEEE float 32-bit.

Float storage makes file round trips lossless for rendered signals, which
are already rounded to float32 precision.
"""

from pathlib import Path

import numpy as np
import soundfile as sf

from fxsearch.exceptions import AudioIOError, IngestionError
from fxsearch.models.audio import SAMPLE_RATE, AudioBuffer

AUDIO_SUFFIXES = (".wav", ".flac", ".aif", ".aiff", ".ogg")


def read_mono(path: Path) -> tuple[np.ndarray, int]:
    """
    Read any soundfile-supported file and average its channels.

    Returns:
        (samples, sample_rate)

    Raises:
        AudioIOError: If the file cannot be read
    """
    try:
        data, sample_rate = sf.read(str(path), always_2d=True, dtype="float64")
    except (sf.LibsndfileError, RuntimeError, OSError) as e:
        raise AudioIOError(path, f"Cannot read audio {path}: {e}") from e
    return data.mean(axis=1), int(sample_rate)


def read_wav(path: Path) -> AudioBuffer:
    """
    Read a mono 44.1 kHz file into an AudioBuffer.

    Raises:
        AudioIOError: If the file cannot be read
        IngestionError: If the sample rate is not 44.1 kHz
    """
    samples, sample_rate = read_mono(path)
    if sample_rate != SAMPLE_RATE:
        raise IngestionError(
            f"{path}: sample rate {sample_rate} Hz, expected {SAMPLE_RATE} (no resampling)",
            details={"path": str(path), "sample_rate": sample_rate},
        )
    return AudioBuffer(samples=samples)


def write_wav(path: Path, buf: AudioBuffer) -> None:
    """
    Write an AudioBuffer as a 32-bit float WAV.

    Raises:
        AudioIOError: If the file cannot be written
    """
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        sf.write(str(path), buf.samples.astype(np.float32), buf.sample_rate, subtype="FLOAT")
    except (sf.LibsndfileError, RuntimeError, OSError) as e:
        raise AudioIOError(path, f"Cannot write audio {path}: {e}") from e
