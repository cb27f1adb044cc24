"""
Tests for signal and configuration metrics.
"""

import itertools

import numpy as np
import pytest

from fxsearch.exceptions import DimensionError, EmptyInputError, SilentSignalError, TypeMismatchError, ValidationError
from fxsearch.metrics.classification import exact_match, levenshtein, macro_f1, param_mae
from fxsearch.metrics.signal import SI_SDR_CAP_DB, StftConfig, mr_stft, si_sdr
from fxsearch.models.audio import AudioBuffer
from fxsearch.models.params import NONE_CLASS, EffectParams, EffectType

C, D, R = EffectType.CHORUS, EffectType.DISTORTION, EffectType.REVERB


def _tone(cycles: int = 50, n: int = 8820) -> tuple[np.ndarray, np.ndarray]:
    phase = 2.0 * np.pi * cycles * np.arange(n) / n
    return np.sin(phase), np.cos(phase)


def test_si_sdr_identity_hits_cap(noise):
    """Test that a perfect estimate scores the cap."""
    assert si_sdr(noise, noise) == SI_SDR_CAP_DB


def test_si_sdr_is_scale_invariant(noise, dry):
    """Test that scaling the estimate leaves the score unchanged."""
    estimate = noise.with_samples(noise.samples + 0.3 * dry.samples[: len(noise)])

    base = si_sdr(estimate, noise)
    for alpha in (0.01, 2.0, 37.0):
        scaled = estimate.with_samples(alpha * estimate.samples)
        assert si_sdr(scaled, noise) == pytest.approx(base, abs=1e-6)
    assert si_sdr(noise.with_samples(2.0 * noise.samples), noise) == SI_SDR_CAP_DB


def test_si_sdr_scale_invariance_random_pairs():
    """Test invariance under positive scaling of the estimate on 100 random pairs."""
    rng = np.random.default_rng(2024)
    for _ in range(100):
        reference = AudioBuffer.from_array(0.1 * rng.standard_normal(2048))
        estimate = AudioBuffer.from_array(reference.samples + rng.uniform(0.01, 0.5) * rng.standard_normal(2048))
        alpha = float(10 ** rng.uniform(-2.0, 2.0))

        scaled = estimate.with_samples(alpha * estimate.samples)

        assert si_sdr(scaled, reference) == pytest.approx(si_sdr(estimate, reference), abs=1e-6)


def test_si_sdr_with_orthogonal_noise():
    """Test the 20 dB case: orthogonal noise at one hundredth of the energy."""
    sine, cosine = _tone()
    reference = AudioBuffer.from_array(sine)
    estimate = AudioBuffer.from_array(sine + 0.1 * cosine)

    assert si_sdr(estimate, reference) == pytest.approx(20.0, abs=0.1)


def test_si_sdr_orthogonal_estimate_hits_floor():
    """Test that an estimate orthogonal to the reference scores the floor."""
    sine, cosine = _tone()

    assert si_sdr(AudioBuffer.from_array(cosine), AudioBuffer.from_array(sine)) == -SI_SDR_CAP_DB


def test_si_sdr_errors(noise):
    """Test length mismatch and silent reference."""
    with pytest.raises(DimensionError):
        si_sdr(noise, AudioBuffer.from_array(noise.samples[:-1]))
    with pytest.raises(SilentSignalError):
        si_sdr(noise, AudioBuffer.silence(len(noise)))


def test_mr_stft_identity_is_zero(noise):
    """Test that identical signals have zero distance."""
    assert mr_stft(noise, noise) == pytest.approx(0.0, abs=1e-9)


def test_mr_stft_detects_magnitude_mismatch(dry):
    """Test that a scaled copy is at positive distance."""
    assert mr_stft(dry.with_samples(0.5 * dry.samples), dry) > 0.0


def test_mr_stft_decreases_toward_reference(dry, noise):
    """Test monotone decrease along a noise-to-reference interpolation."""
    reference = dry.with_samples(dry.samples / dry.rms() * 0.1)
    distances = [
        mr_stft(reference.with_samples((1 - t) * noise.samples + t * reference.samples), reference)
        for t in (0.0, 0.5, 1.0)
    ]

    assert distances[0] > distances[1] > distances[2]
    assert distances[2] == pytest.approx(0.0, abs=1e-9)


def test_mr_stft_rejects_short_input():
    """Test that inputs shorter than the largest FFT raise."""
    short = AudioBuffer.from_array(np.ones(1000))
    with pytest.raises(DimensionError, match="shorter"):
        mr_stft(short, short)


def test_stft_config_validation():
    """Test resolution ordering and hop divisibility."""
    with pytest.raises(ValidationError, match="ascending"):
        StftConfig(fft_sizes=(1024, 512))
    with pytest.raises(ValidationError, match="Hop"):
        StftConfig(fft_sizes=(510,))
    assert StftConfig().hop(2048) == 512


def test_macro_f1_perfect_and_complement():
    """Test the two extremes on type sets."""
    truth = [frozenset({C}), frozenset({D, R})]
    assert macro_f1(truth, truth, [C, D, R]) == 1.0

    complement = [frozenset({D, R}), frozenset({C})]
    assert macro_f1(complement, truth, [C, D, R]) == 0.0


def test_macro_f1_hand_computed():
    """Test F1_C = 1, F1_D = 2/3, F1_R = 0."""
    truth = [frozenset({C}), frozenset({D}), frozenset({R})]
    predicted = [frozenset({C}), frozenset({D}), frozenset({D})]

    assert macro_f1(predicted, truth, [C, D, R]) == pytest.approx(0.5556, abs=1e-4)


def test_macro_f1_single_labels_with_none_class():
    """Test one-vs-rest over single labels including the stop class."""
    truth = [C, NONE_CLASS, R, D]
    predicted = [C, NONE_CLASS, D, D]
    classes = [C, D, R, NONE_CLASS]

    # C 1, D 2/3, R 0, None 1
    assert macro_f1(predicted, truth, classes) == pytest.approx((1 + 2 / 3 + 0 + 1) / 4)
    assert macro_f1(predicted, truth, list(reversed(classes))) == pytest.approx(
        macro_f1(predicted, truth, classes)
    )


def test_macro_f1_errors():
    """Test empty and misaligned input."""
    with pytest.raises(EmptyInputError):
        macro_f1([], [], [C])
    with pytest.raises(DimensionError):
        macro_f1([C], [C, D], [C])


def test_levenshtein_examples():
    """Test identity, a swap and a deletion."""
    assert levenshtein((C, D, R), (C, D, R)) == 0
    assert levenshtein((C, D), (D, C)) == 2
    assert levenshtein((C,), ()) == 1
    assert levenshtein((), (C, D, R)) == 3


def test_levenshtein_is_a_metric():
    """Test symmetry, identity and the triangle inequality over all short sequences."""
    sequences = [
        s for n in range(4) for s in itertools.product((C, D, R), repeat=n)
    ]
    rng = np.random.default_rng(0)
    for _ in range(200):
        a, b, c = (sequences[i] for i in rng.integers(0, len(sequences), 3))
        assert levenshtein(a, b) == levenshtein(b, a)
        assert (levenshtein(a, b) == 0) == (a == b)
        assert levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c)


def test_exact_match_examples():
    """Test order and length sensitivity."""
    assert exact_match([(C, D), (R,)], [(C, D), (R,)]) == 1.0
    assert exact_match([(D, C), (R,)], [(C, D), (R,)]) == 0.5
    assert exact_match([(C,), (R, D)], [(C, D), (R,)]) == 0.0
    with pytest.raises(EmptyInputError):
        exact_match([], [])


def test_param_mae_examples():
    """Test zero, full-range and a mixed error."""
    a = EffectParams(type=R, params_norm=[0.2, 0.4, 0.6])
    b = EffectParams(type=R, params_norm=[0.4, 0.4, 0.2])

    assert param_mae(a, a) == 0.0
    assert param_mae(a, b) == pytest.approx(0.2, abs=1e-9)
    assert param_mae(
        EffectParams(type=D, params_norm=[0.0]), EffectParams(type=D, params_norm=[1.0])
    ) == 1.0


def test_param_mae_rejects_type_mismatch():
    """Test that different effect types cannot be compared."""
    with pytest.raises(TypeMismatchError):
        param_mae(EffectParams.midpoint(C), EffectParams.midpoint(R))
