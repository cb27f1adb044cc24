"""
Shared fixtures: short synthetic signals and a quiet logfire setup.
"""

import numpy as np
import pytest

from fxsearch.dataset.synthetic import synthetic_track
from fxsearch.models.audio import AudioBuffer
from fxsearch.observability import configure_logging


@pytest.fixture(autouse=True, scope="session")
def quiet_logging():
    """Keep logfire local and silent for the whole run."""
    configure_logging(-1)


@pytest.fixture
def dry() -> AudioBuffer:
    """Half a second of plucked-string audio."""
    return synthetic_track(seed=7, seconds=0.5)


@pytest.fixture
def noise() -> AudioBuffer:
    """Half a second of white noise at RMS 0.1."""
    rng = np.random.default_rng(3)
    return AudioBuffer.from_array(0.1 * rng.standard_normal(22050))


@pytest.fixture
def impulse() -> AudioBuffer:
    samples = np.zeros(4410)
    samples[0] = 1.0
    return AudioBuffer.from_array(samples)
