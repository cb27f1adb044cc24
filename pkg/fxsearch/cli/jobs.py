"""
Per-entry estimation jobs run by the CLI worker pool.

A job is a plain pydantic record so it pickles cheaply; the worker rebuilds
its predictor from the manifest and writes its own output files.
"""

import json
import math
from enum import Enum
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field

from fxsearch.config import Settings
from fxsearch.dataset.audio_io import read_wav, write_wav
from fxsearch.exceptions import ArgumentError, AudioIOError
from fxsearch.models.manifest import Manifest
from fxsearch.models.results import EstimationResult, SearchMode
from fxsearch.optim.trace import write_trace_csv
from fxsearch.predictor.base import Predictor
from fxsearch.predictor.heuristic import HeuristicPredictor
from fxsearch.predictor.noisy import noisy_oracle_predictor
from fxsearch.predictor.oracle import oracle_predictor
from fxsearch.search.estimate import estimate


class PredictorKind(str, Enum):
    """Predictor stand-ins selectable from the command line."""

    ORACLE = "oracle"
    NOISY = "noisy"
    HEURISTIC = "heuristic"


class NoiseKnobs(BaseModel):
    """Noisy-oracle error injection."""

    model_config = ConfigDict(frozen=True)

    type_flip_prob: float = 0.0
    dry_snr_db: float = math.inf
    param_noise_std: float = 0.0


class EstimateJob(BaseModel):
    """Everything a worker needs to estimate one wet signal."""

    model_config = ConfigDict(frozen=True)

    wet_path: Path = Field(description="Wet signal to analyse")
    stem: str = Field(description="Output file stem")
    out_dir: Path = Field(description="Directory receiving result, trace and dry estimate")
    mode: SearchMode
    predictor: PredictorKind
    seed: int = Field(description="Derived per-entry seed")
    search: bool = True
    settings: Settings
    manifest_path: Path | None = None
    entry_id: str | None = None
    noise: NoiseKnobs = Field(default_factory=NoiseKnobs)
    thresholds_path: Path | None = None


def build_predictor(job: EstimateJob) -> Predictor:
    """
    Instantiate the job's predictor.

    Raises:
        ArgumentError: If an oracle-backed predictor has no manifest entry
    """
    if job.predictor is PredictorKind.HEURISTIC:
        if job.thresholds_path is None:
            raise ArgumentError("Heuristic predictor needs calibrated thresholds")
        return HeuristicPredictor.load(job.thresholds_path)

    if job.manifest_path is None or job.entry_id is None:
        raise ArgumentError(
            f"Predictor '{job.predictor.value}' needs a manifest entry",
            details={"wet": str(job.wet_path)},
        )
    manifest = Manifest.read(job.manifest_path)
    oracle = oracle_predictor(manifest.get(job.entry_id), manifest.root)
    if job.predictor is PredictorKind.ORACLE:
        return oracle
    return noisy_oracle_predictor(
        oracle,
        type_flip_prob=job.noise.type_flip_prob,
        dry_snr_db=job.noise.dry_snr_db,
        param_noise_std=job.noise.param_noise_std,
        seed=job.seed,
    )


def write_result(result: EstimationResult, out_dir: Path, stem: str) -> Path:
    """
    Write <stem>.json, <stem>.trace.csv and <stem>.dry.wav.

    Paths inside the JSON are relative to out_dir.
    """
    out_dir.mkdir(parents=True, exist_ok=True)
    trace_name = f"{stem}.trace.csv"
    dry_name = f"{stem}.dry.wav"
    write_trace_csv(out_dir / trace_name, [(result.entry_id or stem, result.trace)])
    write_wav(out_dir / dry_name, result.dry_estimate)

    json_path = out_dir / f"{stem}.json"
    payload = result.to_json_dict(trace_path=trace_name, dry_estimate_path=dry_name)
    try:
        json_path.write_text(json.dumps(payload, indent=2), encoding="utf-8")
    except OSError as e:
        raise AudioIOError(json_path, f"Cannot write result {json_path}: {e}") from e
    return json_path


def run_job(job: EstimateJob) -> dict[str, Any]:
    """Estimate one wet signal and store the result; returns a summary row."""
    wet = read_wav(job.wet_path)
    result = estimate(
        wet,
        build_predictor(job),
        job.mode,
        seed=job.seed,
        search=job.search,
        settings=job.settings,
        entry_id=job.entry_id,
    )
    path = write_result(result, job.out_dir, job.stem)
    return {
        "entry_id": job.entry_id or job.stem,
        "chain": result.chain.describe(),
        "score_db": result.score,
        "evaluations": result.evaluations,
        "path": str(path),
    }
