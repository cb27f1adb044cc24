"""
Tests for the oracle, noisy-oracle and heuristic predictors.
"""

import math

import numpy as np
import pytest

from fxsearch.dataset.synthetic import synthetic_track
from fxsearch.effects.chain import apply_chain, render_prefixes
from fxsearch.exceptions import ArgumentError, CalibrationError, ManifestError, PredictorError
from fxsearch.metrics.signal import si_sdr
from fxsearch.models.audio import AudioBuffer
from fxsearch.models.chain import ChainConfig
from fxsearch.models.params import NONE_CLASS, EffectParams, EffectType
from fxsearch.models.results import SearchMode
from fxsearch.predictor import (
    CalibrationSample,
    HeuristicPredictor,
    LastPrediction,
    NoisyOraclePredictor,
    OraclePredictor,
    heuristic_predictor,
    noisy_oracle_predictor,
)
from fxsearch.predictor.features import crest_factor, extract_features, saturation_ratio
from fxsearch.predictor.heuristic import Direction, fit_threshold

C, D, R = EffectType.CHORUS, EffectType.DISTORTION, EffectType.REVERB

CHAIN_CD = ChainConfig(
    stages=(
        EffectParams(type=C, params_norm=[0.3, 0.1, 0.9]),
        EffectParams(type=D, params_norm=[0.7]),
    )
)


@pytest.fixture
def oracle_cd(dry) -> tuple[OraclePredictor, list[AudioBuffer]]:
    intermediates = render_prefixes(dry, CHAIN_CD)
    return OraclePredictor(dry, CHAIN_CD, intermediates), intermediates


def test_oracle_predict_last_peels_one_stage(dry, oracle_cd):
    """Test (D, params_D, intermediate after C) for chain C>D."""
    oracle, intermediates = oracle_cd

    prediction = oracle.predict_last(intermediates[-1])

    assert prediction.effect is D
    assert prediction.params == CHAIN_CD.stages[1]
    assert prediction.bypass.equals(intermediates[0])


def test_oracle_predict_last_on_dry_is_none_class(dry, oracle_cd):
    """Test the stop class for the dry signal."""
    oracle, _ = oracle_cd

    prediction = oracle.predict_last(dry)

    assert prediction.is_stop
    assert prediction.params is None
    assert prediction.bypass.equals(dry)


def test_oracle_empty_chain(dry):
    """Test an entry without effects."""
    oracle = OraclePredictor(dry, ChainConfig.empty(), [])

    assert oracle.predict_last(dry).effect is NONE_CLASS
    assert oracle.predict_direct(dry).types == frozenset()


def test_oracle_predict_direct_returns_type_set(dry):
    """Test that direct prediction drops the order."""
    chain = ChainConfig(stages=tuple(EffectParams.midpoint(t) for t in (R, D, C)))
    oracle = OraclePredictor(dry, chain, render_prefixes(dry, chain))

    prediction = oracle.predict_direct(apply_chain(dry, chain))

    assert prediction.types == {C, D, R}
    assert prediction.dry_estimate.equals(dry)


def test_oracle_locates_noisy_copies(oracle_cd):
    """Test that a perturbed intermediate still maps to its stage."""
    oracle, intermediates = oracle_cd
    rng = np.random.default_rng(0)
    perturbed = intermediates[0].with_samples(
        intermediates[0].samples + 0.001 * rng.standard_normal(len(intermediates[0]))
    )

    assert oracle.locate(perturbed) == 1


def test_oracle_rejects_missing_intermediates(dry):
    """Test that every stage needs its rendered signal."""
    with pytest.raises(ManifestError):
        OraclePredictor(dry, CHAIN_CD, [dry])


def test_oracle_supports_every_mode(oracle_cd):
    """Test the declared contracts."""
    oracle, _ = oracle_cd

    assert all(oracle.supports(mode) for mode in SearchMode)


def test_last_prediction_contract(dry):
    """Test that parameters must agree with the predicted class."""
    with pytest.raises(PredictorError, match="None-class"):
        LastPrediction(effect=NONE_CLASS, params=EffectParams.midpoint(D), bypass=dry)
    with pytest.raises(PredictorError, match="do not match"):
        LastPrediction(effect=C, params=EffectParams.midpoint(D), bypass=dry)


def test_noisy_oracle_without_noise_equals_oracle(dry, oracle_cd):
    """Test that zero knobs reproduce the oracle exactly."""
    oracle, intermediates = oracle_cd
    noisy = noisy_oracle_predictor(oracle, 0.0, math.inf, 0.0, seed=3)

    for signal in [dry, *intermediates]:
        assert noisy.predict_last(signal) == oracle.predict_last(signal)
    assert noisy.predict_direct(intermediates[-1]) == oracle.predict_direct(intermediates[-1])


def test_noisy_oracle_dry_snr(dry, oracle_cd):
    """Test that the returned dry signal sits at the requested SNR."""
    oracle, intermediates = oracle_cd
    noisy = NoisyOraclePredictor(oracle, dry_snr_db=20.0, seed=5)

    estimate = noisy.predict_direct(intermediates[-1]).dry_estimate

    assert si_sdr(estimate, dry) == pytest.approx(20.0, abs=0.3)


def test_noisy_oracle_flips_every_type(oracle_cd):
    """Test flip probability one on the last stage."""
    oracle, intermediates = oracle_cd
    noisy = NoisyOraclePredictor(oracle, type_flip_prob=1.0, seed=0)

    prediction = noisy.predict_last(intermediates[-1])

    assert prediction.effect is not D
    assert prediction.params == EffectParams.midpoint(prediction.effect)


def test_noisy_oracle_flipped_type_set_keeps_its_size(dry):
    """Test that flips into a type set never merge two labels."""
    for chain in (
        ChainConfig(stages=(EffectParams.midpoint(D),)),
        CHAIN_CD,
        ChainConfig(stages=tuple(EffectParams.midpoint(t) for t in (C, D, R))),
    ):
        intermediates = render_prefixes(dry, chain)
        oracle = OraclePredictor(dry, chain, intermediates)

        for seed in range(5):
            noisy = NoisyOraclePredictor(oracle, type_flip_prob=1.0, seed=seed)
            types = noisy.predict_direct(intermediates[-1]).types

            assert len(types) == chain.length
            if chain.length < 3:
                assert types != chain.type_set


def test_noisy_oracle_never_flips_the_stop_class(dry, oracle_cd):
    """Test that the dry signal still ends the iteration."""
    oracle, _ = oracle_cd
    noisy = NoisyOraclePredictor(oracle, type_flip_prob=1.0, seed=0)

    assert noisy.predict_last(dry).is_stop


def test_noisy_oracle_param_noise_is_clamped_and_seeded(oracle_cd):
    """Test perturbed parameters stay in [0, 1] and repeat per seed."""
    oracle, intermediates = oracle_cd
    noisy = NoisyOraclePredictor(oracle, param_noise_std=0.5, seed=8)

    first = noisy.predict_last(intermediates[0])
    second = noisy.predict_last(intermediates[0])

    assert first == second
    assert first.params is not None
    assert first.params != CHAIN_CD.stages[0]
    assert all(0.0 <= v <= 1.0 for v in first.params.values)


def test_noisy_oracle_rejects_bad_knobs(oracle_cd):
    """Test knob domains."""
    oracle, _ = oracle_cd
    with pytest.raises(ArgumentError):
        NoisyOraclePredictor(oracle, type_flip_prob=1.5)
    with pytest.raises(ArgumentError):
        NoisyOraclePredictor(oracle, dry_snr_db=math.nan)
    with pytest.raises(ArgumentError):
        NoisyOraclePredictor(oracle, param_noise_std=-0.1)


def test_features_on_simple_waveforms():
    """Test crest factor and saturation on a square wave."""
    square = AudioBuffer.from_array(np.sign(np.sin(np.linspace(0.0, 40.0 * np.pi, 8000))) * 0.5)

    assert crest_factor(square) == pytest.approx(1.0, abs=1e-3)
    assert saturation_ratio(square) > 0.99
    assert set(extract_features(square)) == {
        "crest_factor",
        "saturation_ratio",
        "odd_harmonic_ratio",
        "envelope_floor_db",
        "envelope_autocorrelation",
        "lfo_modulation",
    }


def test_fit_threshold_separates_labels():
    """Test a perfectly separable feature."""
    values = np.array([0.1, 0.2, 0.8, 0.9])
    labels = np.array([False, False, True, True])

    rule = fit_threshold("x", D, values, labels)

    assert rule.f1 == 1.0
    assert rule.direction is Direction.ABOVE
    assert 0.2 < rule.threshold < 0.8


def test_fit_threshold_without_positives_never_fires():
    """Test the conservative rule for an absent effect."""
    values = np.array([0.1, 0.5, 0.9])

    rule = fit_threshold("x", R, values, np.zeros(3, dtype=bool))

    assert not any(rule.fires(v) for v in values)


def _calibration_set() -> list[CalibrationSample]:
    heavy = ChainConfig(stages=(EffectParams(type=D, params_norm=[1.0]),))
    samples = []
    for seed in range(6):
        dry = synthetic_track(seed=100 + seed, seconds=0.5)
        chain = heavy if seed % 2 else ChainConfig.empty()
        samples.append(CalibrationSample(audio=apply_chain(dry, chain), chain=chain))
    return samples


def test_heuristic_calibration_detects_distortion():
    """Test that calibrated thresholds separate distorted from clean input."""
    samples = _calibration_set()

    predictor = heuristic_predictor(iter(samples))

    assert set(predictor.thresholds) == set(extract_features(samples[0].audio))
    assert predictor.selected[D].f1 == 1.0
    for sample in samples:
        detected = predictor.predict_direct(sample.audio)
        assert (D in detected.types) == (not sample.chain.is_empty)
        assert detected.dry_estimate.equals(sample.audio)


def test_heuristic_save_and_load(tmp_path):
    """Test the thresholds sidecar."""
    predictor = HeuristicPredictor.calibrate(_calibration_set())
    path = tmp_path / "thresholds.json"

    predictor.save(path)
    loaded = HeuristicPredictor.load(path)

    assert loaded.thresholds == predictor.thresholds


def test_heuristic_errors(tmp_path, dry):
    """Test empty calibration, a corrupt sidecar and the unsupported contract."""
    with pytest.raises(CalibrationError, match="empty"):
        HeuristicPredictor.calibrate([])

    path = tmp_path / "thresholds.json"
    path.write_text("not json")
    with pytest.raises(CalibrationError):
        HeuristicPredictor.load(path)

    predictor = HeuristicPredictor.calibrate(_calibration_set())
    assert predictor.supports(SearchMode.DRY_TYPE_DIRECT)
    assert not predictor.supports(SearchMode.BYPASS_TYPE_ITER)
    with pytest.raises(PredictorError):
        predictor.predict_last(dry)
