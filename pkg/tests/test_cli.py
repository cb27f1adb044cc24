"""
Tests for the fxsearch command line.
"""

import csv
import hashlib
import json
from pathlib import Path

import pytest
from typer.testing import CliRunner

from fxsearch.cli.main import app
from fxsearch.dataset import MANIFEST_NAME, generate, read_wav, split, write_split_assignment, write_wav
from fxsearch.dataset.ingest import DryChunk
from fxsearch.dataset.synthetic import synthetic_track
from fxsearch.effects.chain import apply_chain
from fxsearch.models.audio import quantize_float32, rms_normalize
from fxsearch.models.chain import ChainConfig
from fxsearch.models.manifest import Manifest, Split
from fxsearch.models.params import EffectParams, EffectType

runner = CliRunner()

D = EffectType.DISTORTION


@pytest.fixture(scope="module")
def corpus(tmp_path_factory) -> Manifest:
    """Three half-second tracks, rendered and split one track per split."""
    root = tmp_path_factory.mktemp("corpus")
    chunks = [
        DryChunk(
            track_id=name,
            chunk_index=0,
            audio=quantize_float32(rms_normalize(synthetic_track(seed=seed, seconds=0.5))),
        )
        for seed, name in enumerate(["alpha", "beta", "gamma"])
    ]
    manifest = split(generate(chunks, root, seed=3, jobs=1), seed=3)
    manifest.write(root / MANIFEST_NAME)
    write_split_assignment(manifest, root / "splits.json")
    return manifest


@pytest.fixture
def small_config(tmp_path) -> Path:
    config = tmp_path / "run.conf"
    config.write_text("jobs = 1\nm0_first_stage = 2\nm0_second_stage = 2\n")
    return config


def _entry_ids(manifest: Manifest, length: int, count: int) -> list[str]:
    return [e.entry_id for e in manifest.in_split(Split.EVAL) if e.chain.length == length][:count]


def _digests(root: Path) -> dict[str, str]:
    return {
        str(path.relative_to(root)): hashlib.sha256(path.read_bytes()).hexdigest()
        for path in sorted(root.rglob("*"))
        if path.is_file()
    }


def test_version():
    """Test the version command."""
    result = runner.invoke(app, ["version"])

    assert result.exit_code == 0
    assert "fxsearch version" in result.stdout


def test_render_inline_and_file_chain(tmp_path, dry):
    """Test rendering from inline JSON and from a chain file."""
    chain = ChainConfig(stages=(EffectParams(type=D, params_norm=[0.4]), EffectParams.midpoint(EffectType.REVERB)))
    dry_path = tmp_path / "dry.wav"
    write_wav(dry_path, quantize_float32(dry))
    chain_path = tmp_path / "chain.json"
    chain_path.write_text(chain.to_json())

    inline = runner.invoke(app, ["render", "--dry", str(dry_path), "--chain", chain.to_json(), "--out", str(tmp_path / "a.wav"), "-q"])
    from_file = runner.invoke(app, ["render", "--dry", str(dry_path), "--chain", str(chain_path), "--out", str(tmp_path / "b.wav"), "-q"])

    assert inline.exit_code == 0, inline.output
    assert from_file.exit_code == 0, from_file.output
    expected = apply_chain(read_wav(dry_path), chain)
    assert read_wav(tmp_path / "a.wav").equals(expected)
    assert read_wav(tmp_path / "b.wav").equals(expected)


def test_render_missing_dry_is_a_data_error(tmp_path):
    """Test exit code 3 for an unreadable input."""
    chain = ChainConfig(stages=(EffectParams.midpoint(D),))

    result = runner.invoke(
        app, ["render", "--dry", str(tmp_path / "nope.wav"), "--chain", chain.to_json(), "--out", str(tmp_path / "x.wav"), "-q"]
    )

    assert result.exit_code == 3


def test_render_bad_chain_is_a_usage_error(tmp_path, dry):
    """Test exit code 2 for a chain longer than three effects."""
    dry_path = tmp_path / "dry.wav"
    write_wav(dry_path, dry)
    stage = EffectParams.midpoint(D).to_json_dict()

    result = runner.invoke(
        app,
        ["render", "--dry", str(dry_path), "--chain", json.dumps({"stages": [stage] * 4}), "--out", str(tmp_path / "x.wav"), "-q"],
    )

    assert result.exit_code == 2
    assert not (tmp_path / "x.wav").exists()


def test_gen_needs_exactly_one_source(tmp_path):
    """Test the usage error without --dry-dir or --synthetic."""
    result = runner.invoke(app, ["gen", "--out", str(tmp_path / "corpus"), "-q"])

    assert result.exit_code == 2


def test_estimate_needs_an_input(tmp_path):
    """Test the usage error without --wet or a manifest selection."""
    result = runner.invoke(app, ["estimate", "--out", str(tmp_path / "results"), "-q"])

    assert result.exit_code == 2


def test_estimate_single_entry(tmp_path, corpus, small_config):
    """Test the files written for one oracle estimate."""
    entry_id = _entry_ids(corpus, 1, 1)[0]
    out = tmp_path / "one.json"

    result = runner.invoke(
        app,
        [
            "estimate",
            "--manifest", str(corpus.root / MANIFEST_NAME),
            "--entry", entry_id,
            "--out", str(out),
            "--config", str(small_config),
            "-q",
        ],
    )

    assert result.exit_code == 0, result.output
    record = json.loads(out.read_text())
    assert record["entry_id"] == entry_id
    assert record["mode"] == "direct"
    assert ChainConfig.from_json_dict(record["chain"]).types == corpus.get(entry_id).chain.types
    assert (tmp_path / record["trace_path"]).exists()
    assert (tmp_path / record["dry_estimate_path"]).exists()


def test_estimate_by_wet_path_finds_its_entry(tmp_path, corpus, small_config):
    """Test that a wet file inside the corpus is matched to its manifest entry."""
    entry = corpus.get(_entry_ids(corpus, 2, 1)[0])
    out = tmp_path / "wet.json"

    result = runner.invoke(
        app,
        [
            "estimate",
            "--manifest", str(corpus.root / MANIFEST_NAME),
            "--wet", str(corpus.resolve(entry.wet_path)),
            "--mode", "config-iter",
            "--no-search",
            "--out", str(out),
            "--config", str(small_config),
            "-q",
        ],
    )

    assert result.exit_code == 0, result.output
    record = json.loads(out.read_text())
    assert record["entry_id"] == entry.entry_id
    assert ChainConfig.from_json_dict(record["chain"]) == entry.chain
    assert record["searched"] is False


def test_estimate_evaluate_and_trace(tmp_path, corpus, small_config):
    """Test the estimate -> evaluate -> trace pipeline on a few entries."""
    results = tmp_path / "results"
    entry_args = [arg for entry_id in _entry_ids(corpus, 1, 2) + _entry_ids(corpus, 2, 1) for arg in ("--entry", entry_id)]

    estimated = runner.invoke(
        app,
        [
            "estimate",
            "--manifest", str(corpus.root / MANIFEST_NAME),
            *entry_args,
            "--mode", "type-iter",
            "--out", str(results),
            "--config", str(small_config),
            "-q",
        ],
    )
    assert estimated.exit_code == 0, estimated.output
    assert len(list(results.glob("*.json"))) == 3

    report_path = tmp_path / "report.json"
    evaluated = runner.invoke(
        app,
        [
            "evaluate",
            "--manifest", str(corpus.root / MANIFEST_NAME),
            "--results", str(results),
            "--out", str(report_path),
            "--per-entry", str(tmp_path / "rows"),
            "-q",
        ],
    )
    assert evaluated.exit_code == 0, evaluated.output
    report = json.loads(report_path.read_text())
    assert report["chain_types"]["ema"]["mean"] == 1.0
    assert report["reconstruction"]["si_sdr"]["count"] == 3
    assert "dry_removal" in report
    assert "annotations" in report
    assert (tmp_path / "rows" / "reconstruction.csv").exists()

    trace_path = tmp_path / "trace.csv"
    traced = runner.invoke(app, ["trace", "--results", str(results), "--out", str(trace_path), "-q"])
    assert traced.exit_code == 0, traced.output
    with trace_path.open() as fh:
        rows = list(csv.DictReader(fh))
    assert {row["entry_id"] for row in rows} <= set(_entry_ids(corpus, 1, 2) + _entry_ids(corpus, 2, 1))
    assert all(row["stage"].startswith("iter:") for row in rows)


def test_estimate_heuristic_calibrates_on_val(tmp_path, corpus, small_config):
    """Test heuristic estimation without search on the eval split."""
    results = tmp_path / "results"

    result = runner.invoke(
        app,
        [
            "estimate",
            "--manifest", str(corpus.root / MANIFEST_NAME),
            "--split", "eval",
            "--predictor", "heuristic",
            "--no-search",
            "--out", str(results),
            "--config", str(small_config),
            "-q",
        ],
    )

    assert result.exit_code == 0, result.output
    assert (results / "thresholds.json").exists()
    assert len([p for p in results.glob("*.json") if p.name != "thresholds.json"]) == 44


def test_estimate_heuristic_rejects_iterative_modes(tmp_path, corpus, small_config):
    """Test that the direct-only predictor fails cleanly in an iterative mode."""
    result = runner.invoke(
        app,
        [
            "estimate",
            "--manifest", str(corpus.root / MANIFEST_NAME),
            "--entry", _entry_ids(corpus, 1, 1)[0],
            "--predictor", "heuristic",
            "--mode", "type-iter",
            "--out", str(tmp_path / "r"),
            "--config", str(small_config),
            "-q",
        ],
    )

    assert result.exit_code == 3


def test_evaluate_without_results(tmp_path, corpus):
    """Test the data error for an empty results directory."""
    (tmp_path / "empty").mkdir()

    result = runner.invoke(
        app,
        [
            "evaluate",
            "--manifest", str(corpus.root / MANIFEST_NAME),
            "--results", str(tmp_path / "empty"),
            "--out", str(tmp_path / "report.json"),
            "-q",
        ],
    )

    assert result.exit_code == 3


def test_estimate_rerun_is_bit_identical(tmp_path, corpus):
    """Test that two identical estimate runs on a worker pool write identical files."""
    config = tmp_path / "pool.conf"
    config.write_text("jobs = 2\nm0_first_stage = 2\nm0_second_stage = 2\n")
    entry_args = [arg for entry_id in _entry_ids(corpus, 1, 2) + _entry_ids(corpus, 2, 1) for arg in ("--entry", entry_id)]

    for name in ("first", "second"):
        result = runner.invoke(
            app,
            [
                "estimate",
                "--manifest", str(corpus.root / MANIFEST_NAME),
                *entry_args,
                "--mode", "type-iter",
                "--seed", "11",
                "--out", str(tmp_path / name),
                "--config", str(config),
                "-q",
            ],
        )
        assert result.exit_code == 0, result.output

    first = _digests(tmp_path / "first")
    assert len([name for name in first if name.endswith(".json")]) == 3
    assert first == _digests(tmp_path / "second")


@pytest.mark.slow
def test_gen_rerun_is_bit_identical(tmp_path):
    """Test that two identical gen runs write identical corpora."""
    config = tmp_path / "run.conf"
    config.write_text("jobs = 2\n")

    for name in ("first", "second"):
        result = runner.invoke(
            app,
            ["gen", "--out", str(tmp_path / name), "--synthetic", "2", "--seed", "5", "--config", str(config), "-q"],
        )
        assert result.exit_code == 0, result.output

    first = _digests(tmp_path / "first")
    assert MANIFEST_NAME in first
    assert first == _digests(tmp_path / "second")
