"""
Acceptance checks on full-length synthetic material.

Run with: pytest -m slow
"""

import json
from collections import Counter

import numpy as np
import pytest
from typer.testing import CliRunner

from fxsearch.cli.main import app
from fxsearch.config import Settings
from fxsearch.dataset import MANIFEST_NAME
from fxsearch.dataset.synthetic import synthetic_track
from fxsearch.effects.chain import apply_chain, render_prefixes
from fxsearch.metrics.signal import SI_SDR_CAP_DB
from fxsearch.models.audio import quantize_float32, rms_normalize
from fxsearch.models.chain import ChainConfig
from fxsearch.models.manifest import Manifest
from fxsearch.models.params import EffectParams, EffectType, dimension, normalize_params
from fxsearch.models.results import SearchMode
from fxsearch.predictor import NoisyOraclePredictor, OraclePredictor
from fxsearch.search import estimate, search_order_and_params, search_params

pytestmark = pytest.mark.slow

runner = CliRunner()

C, D, R = EffectType.CHORUS, EffectType.DISTORTION, EffectType.REVERB


def test_three_type_search_spends_the_documented_budget():
    """Test 6 x 92 stage-1 trials and 370 stage-2 trials for {C, D, R}."""
    dry = rms_normalize(synthetic_track(seed=17, seconds=2.0))
    chain = ChainConfig(
        stages=(
            EffectParams(type=C, params_norm=[0.2, 0.6, 0.3]),
            EffectParams(type=D, params_norm=[0.5]),
            EffectParams(type=R, params_norm=[0.4, 0.5, 0.3]),
        )
    )
    wet = apply_chain(dry, chain)

    found, score, trace = search_order_and_params(wet, dry, {C, D, R}, seed=42)

    counts = Counter(t.stage.split(":")[0] for t in trace)
    assert counts == {"stage1": 552, "stage2": 370}
    assert len({t.stage for t in trace if t.stage.startswith("stage1")}) == 6
    assert found.type_set == {C, D, R}
    assert score == max(t.score for t in trace)


def test_generate_estimate_evaluate(tmp_path):
    """Test the CLI pipeline on three synthetic tracks with exact oracle predictions."""
    corpus = tmp_path / "corpus"
    config = tmp_path / "run.conf"
    config.write_text("jobs = 2\n")

    generated = runner.invoke(app, ["gen", "--out", str(corpus), "--synthetic", "3", "--config", str(config), "-q"])
    assert generated.exit_code == 0, generated.output

    manifest = Manifest.read(corpus / MANIFEST_NAME)
    assert len(manifest.entries) == 3 * 44
    assert {e.split for e in manifest.entries} == {"train", "val", "eval"}
    assignment = json.loads((corpus / "splits.json").read_text())
    assert sorted(len(ids) for ids in assignment.values()) == [1, 1, 1]

    results = tmp_path / "results"
    estimated = runner.invoke(
        app,
        [
            "estimate",
            "--manifest", str(corpus / MANIFEST_NAME),
            "--split", "eval",
            "--mode", "config-iter",
            "--no-search",
            "--out", str(results),
            "--config", str(config),
            "-q",
        ],
    )
    assert estimated.exit_code == 0, estimated.output

    report_path = tmp_path / "report.json"
    evaluated = runner.invoke(
        app,
        ["evaluate", "--manifest", str(corpus / MANIFEST_NAME), "--results", str(results), "--out", str(report_path), "-q"],
    )
    assert evaluated.exit_code == 0, evaluated.output

    report = json.loads(report_path.read_text())
    assert report["chain_types"]["ema"]["mean"] == 1.0
    assert report["chain_types"]["mean_ld"]["mean"] == 0.0
    assert report["reconstruction"]["si_sdr"]["count"] == 33
    assert report["reconstruction"]["si_sdr"]["mean"] == SI_SDR_CAP_DB
    assert report["dry_removal"]["si_sdr"]["mean"] == SI_SDR_CAP_DB


def test_order_identification_for_distortion_and_reverb():
    """Test that the permutation search finds the true order of D and R on 10 entries x 5 seeds."""
    rng = np.random.default_rng(5)
    hits = 0
    runs = 0
    for entry in range(10):
        dry = quantize_float32(rms_normalize(synthetic_track(seed=200 + entry, seconds=1.0)))
        types = (D, R) if entry % 2 else (R, D)
        chain = ChainConfig(
            stages=tuple(
                EffectParams(type=t, params_norm=rng.uniform(0.0, 1.0, dimension(t)).tolist())
                for t in types
            )
        )
        wet = apply_chain(dry, chain)
        for seed in range(5):
            found, _, _ = search_order_and_params(wet, dry, {D, R}, seed=seed)
            hits += found.types == chain.types
            runs += 1

    assert runs == 50
    assert hits / runs >= 0.8


def test_distortion_drive_recovery():
    """Test median |drive_db error| <= 1 dB over 10 single-distortion entries at m0 = 20."""
    rng = np.random.default_rng(12)
    errors = []
    for entry in range(10):
        dry = quantize_float32(rms_normalize(synthetic_track(seed=400 + entry, seconds=1.0)))
        truth = normalize_params(D, [float(rng.uniform(10.0, 20.0))])
        wet = apply_chain(dry, ChainConfig(stages=(truth,)))

        stages, _, trace = search_params(wet, dry, [D], m0=20, seed=entry)

        assert len(trace) == 20
        errors.append(abs(stages[0].raw_dict()["drive_db"] - truth.raw_dict()["drive_db"]))

    assert float(np.median(errors)) <= 1.0


def test_reverb_reconstruction_at_default_budget():
    """Test median SI-SDR >= 20 dB for single-reverb searches of 103 trials."""
    rng = np.random.default_rng(13)
    scores = []
    for entry in range(10):
        dry = quantize_float32(rms_normalize(synthetic_track(seed=500 + entry, seconds=1.0)))
        truth = EffectParams(type=R, params_norm=rng.uniform(0.0, 1.0, 3).tolist())
        wet = apply_chain(dry, ChainConfig(stages=(truth,)))

        _, score, trace = search_params(wet, dry, [R], m0=20, seed=entry)

        assert len(trace) == 103
        scores.append(score)

    assert float(np.median(scores)) >= 20.0


def test_search_beats_noisy_parameter_predictions():
    """Test the mean gain of search over noisy predicted parameters in config-iter mode."""
    settings = Settings(jobs=1)
    rng = np.random.default_rng(9)
    gains = []
    for i, types in enumerate([(D,), (R,), (C,), (C, D), (D, R)]):
        dry = quantize_float32(rms_normalize(synthetic_track(seed=300 + i, seconds=1.0)))
        chain = ChainConfig(
            stages=tuple(
                EffectParams(type=t, params_norm=rng.uniform(0.0, 1.0, dimension(t)).tolist())
                for t in types
            )
        )
        intermediates = render_prefixes(dry, chain)
        noisy = NoisyOraclePredictor(OraclePredictor(dry, chain, intermediates), param_noise_std=0.15, seed=i)
        wet = intermediates[-1]

        searched = estimate(wet, noisy, SearchMode.BYPASS_CONFIG_ITER, seed=i, settings=settings)
        baseline = estimate(wet, noisy, SearchMode.BYPASS_CONFIG_ITER, seed=i, search=False, settings=settings)
        assert searched.score >= baseline.score
        gains.append(searched.score - baseline.score)

    assert float(np.mean(gains)) >= 3.0
