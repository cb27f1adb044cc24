"""
CLI main entry point for fxsearch.

Commands wire the dataset, effects, search and evaluation modules into
reproducible runs. Settings precedence: flags > --config file >
FXSEARCH_* environment (.env honoured) > defaults.

Exit codes: 0 success, 2 usage error, 3 data error, 4 internal invariant
violation.
"""

import json
import math
from collections.abc import Iterator
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Optional

import typer
from rich.console import Console
from rich.table import Table

from fxsearch import __version__
from fxsearch.cli.jobs import EstimateJob, NoiseKnobs, PredictorKind, run_job
from fxsearch.config import Settings, load_settings
from fxsearch.dataset.audio_io import read_wav, write_wav
from fxsearch.dataset.generate import MANIFEST_NAME, generate
from fxsearch.dataset.ingest import chunks_from_tracks, ingest_dry
from fxsearch.dataset.split import SPLITS_NAME, split, write_split_assignment
from fxsearch.dataset.synthetic import synthetic_tracks
from fxsearch.effects.chain import apply_chain
from fxsearch.evaluation.protocol import eval_chain_types, eval_dry_removal, eval_reconstruction
from fxsearch.evaluation.report import Report, write_reports_json
from fxsearch.exceptions import (
    EXIT_INVARIANT,
    ArgumentError,
    AudioIOError,
    FXSearchException,
    ManifestError,
)
from fxsearch.models.chain import ChainConfig
from fxsearch.models.manifest import Manifest, Split
from fxsearch.models.results import SearchMode, StoredResult
from fxsearch.observability import configure_logging
from fxsearch.optim.trace import read_trace_csv, write_trace_csv
from fxsearch.predictor.heuristic import CalibrationSample, HeuristicPredictor
from fxsearch.search.order import derive_seed

app = typer.Typer(
    name="fxsearch",
    help="Search-based audio effect chain estimation",
    add_completion=False,
)

console = Console()
err_console = Console(stderr=True, soft_wrap=True)

THRESHOLDS_NAME = "thresholds.json"

SEED_OPTION = typer.Option(None, "--seed", help="Run seed (default 42)")
CONFIG_OPTION = typer.Option(None, "--config", help="Config file of 'key = value' lines")
JOBS_OPTION = typer.Option(None, "--jobs", "-j", help="Worker processes (default: CPU count)")
VERBOSE_OPTION = typer.Option(0, "--verbose", "-v", count=True, help="Repeat for more logging")
QUIET_OPTION = typer.Option(False, "--quiet", "-q", help="Silence log output")


@contextmanager
def cli_errors() -> Iterator[None]:
    """Map failures to a one-line diagnostic and the matching exit code."""
    try:
        yield
    except (typer.Exit, typer.Abort):
        raise
    except FXSearchException as e:
        err_console.print(f"[red]Error:[/red] {e}", markup=True, highlight=False)
        raise typer.Exit(e.exit_code) from e
    except Exception as e:  # noqa: BLE001
        err_console.print(f"[red]Internal error:[/red] {type(e).__name__}: {e}", highlight=False)
        raise typer.Exit(EXIT_INVARIANT) from e


def setup(
    config: Path | None,
    seed: int | None,
    jobs: int | None = None,
    verbose: int = 0,
    quiet: bool = False,
) -> Settings:
    """Resolve settings and configure logging."""
    verbosity = -1 if quiet else (verbose or None)
    settings = load_settings(config, seed=seed, jobs=jobs, verbosity=verbosity)
    configure_logging(settings.verbosity)
    return settings


@app.command()
def version() -> None:
    """Show version information."""
    console.print(f"fxsearch version {__version__}")


@app.command()
def gen(
    out: Path = typer.Option(..., "--out", help="Output corpus directory"),
    dry_dir: Optional[Path] = typer.Option(None, "--dry-dir", help="Directory of dry recordings"),
    synthetic: Optional[int] = typer.Option(
        None, "--synthetic", help="Use N built-in plucked-string tracks instead of --dry-dir"
    ),
    seed: Optional[int] = SEED_OPTION,
    jobs: Optional[int] = JOBS_OPTION,
    config: Optional[Path] = CONFIG_OPTION,
    verbose: int = VERBOSE_OPTION,
    quiet: bool = QUIET_OPTION,
) -> None:
    """Build a corpus: chunks, 33 rendered chains + 11 empty entries per chunk, splits."""
    with cli_errors():
        settings = setup(config, seed, jobs, verbose, quiet)
        if (dry_dir is None) == (synthetic is None):
            raise ArgumentError("Pass exactly one of --dry-dir or --synthetic")

        warnings: list[dict[str, Any]] = []
        if synthetic is not None:
            if synthetic < 1:
                raise ArgumentError("--synthetic needs a positive track count")
            chunks = chunks_from_tracks(synthetic_tracks(synthetic, settings.seed), settings.target_rms)
        else:
            assert dry_dir is not None
            chunks = ingest_dry(dry_dir, settings.target_rms, warnings)

        manifest = generate(
            chunks,
            out,
            settings.seed,
            jobs=settings.jobs,
            target_rms=settings.target_rms,
            warnings=warnings,
            verbosity=settings.verbosity,
        )
        manifest = split(manifest, settings.split_ratios, settings.seed)
        manifest.write(out / MANIFEST_NAME)
        write_split_assignment(manifest, out / SPLITS_NAME)

        table = Table(title="Corpus")
        table.add_column("Split", style="cyan")
        table.add_column("Tracks", justify="right")
        table.add_column("Entries", justify="right")
        for part in Split:
            entries = manifest.in_split(part)
            table.add_row(part.value, str(len({e.track_id for e in entries})), str(len(entries)))
        console.print(table)
        console.print(f"[green]Manifest:[/green] {out / MANIFEST_NAME}")
        if manifest.warnings:
            console.print(f"[yellow]{len(manifest.warnings)} warning(s) recorded[/yellow]")


@app.command()
def render(
    dry: Path = typer.Option(..., "--dry", help="Dry WAV (mono, 44.1 kHz)"),
    chain: str = typer.Option(..., "--chain", help="Chain JSON, inline or a file path"),
    out: Path = typer.Option(..., "--out", help="Output WAV"),
    seed: Optional[int] = SEED_OPTION,
    config: Optional[Path] = CONFIG_OPTION,
    verbose: int = VERBOSE_OPTION,
    quiet: bool = QUIET_OPTION,
) -> None:
    """Render one chain on a dry file."""
    with cli_errors():
        settings = setup(config, seed, None, verbose, quiet)
        if not chain.lstrip().startswith("{"):
            chain_path = Path(chain)
            try:
                chain = chain_path.read_text(encoding="utf-8")
            except OSError as e:
                raise AudioIOError(chain_path, f"Cannot read chain {chain_path}: {e}") from e
        config_chain = ChainConfig.from_json(chain)
        write_wav(out, apply_chain(read_wav(dry), config_chain, settings.target_rms))
        console.print(f"[green]Rendered[/green] {config_chain.describe()} -> {out}")


def _calibrated_thresholds(manifest: Manifest, split_name: Split, path: Path) -> Path:
    """Calibrate the heuristic on a split and persist the sidecar."""
    entries = manifest.in_split(split_name)
    samples = (
        CalibrationSample(audio=read_wav(manifest.resolve(e.wet_path)), chain=e.chain) for e in entries
    )
    HeuristicPredictor.calibrate(samples).save(path)
    return path


def _find_entry_by_wet(manifest: Manifest, wet: Path) -> str | None:
    target = wet.resolve()
    for entry in manifest.entries:
        if manifest.resolve(entry.wet_path).resolve() == target and not entry.is_empty_chain:
            return entry.entry_id
    for entry in manifest.entries:
        if manifest.resolve(entry.wet_path).resolve() == target:
            return entry.entry_id
    return None


@app.command("estimate")
def estimate_command(
    out: Path = typer.Option(..., "--out", help="Result JSON (single input) or output directory"),
    mode: SearchMode = typer.Option(SearchMode.DRY_TYPE_DIRECT, "--mode", help="Task division"),
    predictor: PredictorKind = typer.Option(PredictorKind.ORACLE, "--predictor", help="Predictor stand-in"),
    manifest_path: Optional[Path] = typer.Option(None, "--manifest", help="Corpus manifest"),
    wet: Optional[Path] = typer.Option(None, "--wet", help="Wet WAV to analyse"),
    entry: Optional[list[str]] = typer.Option(None, "--entry", help="Manifest entry id (repeatable)"),
    split_name: Optional[Split] = typer.Option(None, "--split", help="Estimate every entry of a split"),
    type_flip_prob: float = typer.Option(0.0, "--type-flip-prob", help="Noisy oracle: type flip probability"),
    dry_snr_db: float = typer.Option(math.inf, "--dry-snr-db", help="Noisy oracle: audio SNR in dB"),
    param_noise_std: float = typer.Option(0.0, "--param-noise-std", help="Noisy oracle: parameter noise"),
    thresholds: Optional[Path] = typer.Option(None, "--thresholds", help="Heuristic thresholds JSON"),
    calibration_split: Split = typer.Option(Split.VAL, "--calibration-split", help="Heuristic calibration split"),
    no_search: bool = typer.Option(False, "--no-search", help="Skip the search stage (baseline)"),
    seed: Optional[int] = SEED_OPTION,
    jobs: Optional[int] = JOBS_OPTION,
    config: Optional[Path] = CONFIG_OPTION,
    verbose: int = VERBOSE_OPTION,
    quiet: bool = QUIET_OPTION,
) -> None:
    """Estimate effect chains for a wet file or for manifest entries."""
    with cli_errors():
        settings = setup(config, seed, jobs, verbose, quiet)
        manifest = Manifest.read(manifest_path) if manifest_path is not None else None

        targets: list[tuple[Path, str | None]] = []
        if wet is not None:
            entry_id = entry[0] if entry else None
            if entry_id is None and manifest is not None:
                entry_id = _find_entry_by_wet(manifest, wet)
            targets.append((wet, entry_id))
        elif manifest is not None and (entry or split_name is not None):
            if entry:
                selected = [manifest.get(e) for e in entry]
            else:
                assert split_name is not None
                selected = manifest.in_split(split_name)
            targets.extend((manifest.resolve(e.wet_path), e.entry_id) for e in selected)
        else:
            raise ArgumentError("Pass --wet, or --manifest with --entry or --split")
        if not targets:
            raise ManifestError("No entries selected")

        single = out.suffix == ".json"
        if single and len(targets) != 1:
            raise ArgumentError("A .json --out takes exactly one input; pass a directory instead")
        out_dir = out.parent if single else out
        out_dir.mkdir(parents=True, exist_ok=True)

        if predictor is PredictorKind.HEURISTIC and thresholds is None:
            if manifest is None:
                raise ArgumentError("Heuristic predictor needs --thresholds or a --manifest to calibrate on")
            thresholds = _calibrated_thresholds(manifest, calibration_split, out_dir / THRESHOLDS_NAME)

        noise = NoiseKnobs(
            type_flip_prob=type_flip_prob, dry_snr_db=dry_snr_db, param_noise_std=param_noise_std
        )
        estimate_jobs = [
            EstimateJob(
                wet_path=path,
                stem=out.stem if single else (entry_id or path.stem),
                out_dir=out_dir,
                mode=mode,
                predictor=predictor,
                seed=derive_seed(settings.seed, entry_id or path.stem),
                search=not no_search,
                settings=settings,
                manifest_path=manifest_path,
                entry_id=entry_id,
                noise=noise,
                thresholds_path=thresholds,
            )
            for path, entry_id in targets
        ]

        if settings.jobs == 1 or len(estimate_jobs) == 1:
            rows = [run_job(job) for job in estimate_jobs]
        else:
            with ProcessPoolExecutor(
                max_workers=settings.jobs, initializer=configure_logging, initargs=(settings.verbosity,)
            ) as pool:
                rows = list(pool.map(run_job, estimate_jobs))

        table = Table(title=f"Estimates ({mode.value}, {predictor.value})")
        table.add_column("Entry", style="cyan")
        table.add_column("Chain", style="green")
        table.add_column("SI-SDR dB", justify="right")
        table.add_column("Trials", justify="right")
        for row in rows:
            table.add_row(row["entry_id"], row["chain"], f"{row['score_db']:.2f}", str(row["evaluations"]))
        console.print(table)


def load_results(results_dir: Path) -> list[StoredResult]:
    """
    Read every result JSON in a directory, sorted by file name.

    Raises:
        AudioIOError: If the directory cannot be read
    """
    if not results_dir.is_dir():
        raise AudioIOError(results_dir, f"Results directory not found: {results_dir}")
    results = []
    for path in sorted(results_dir.glob("*.json")):
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise AudioIOError(path, f"Cannot read result {path}: {e}") from e
        if isinstance(data, dict) and "chain" in data and "score_db" in data:
            results.append(StoredResult.from_json_dict(data))
    return results


@app.command()
def evaluate(
    manifest_path: Path = typer.Option(..., "--manifest", help="Corpus manifest"),
    results_dir: Path = typer.Option(..., "--results", help="Directory of result JSON files"),
    out: Path = typer.Option(..., "--out", help="Report JSON"),
    ground_truth_dry: bool = typer.Option(
        True, "--ground-truth-dry/--predicted-dry", help="Reconstruct on the true or the estimated dry"
    ),
    per_entry: Optional[Path] = typer.Option(None, "--per-entry", help="Directory for per-entry CSV dumps"),
    seed: Optional[int] = SEED_OPTION,
    config: Optional[Path] = CONFIG_OPTION,
    verbose: int = VERBOSE_OPTION,
    quiet: bool = QUIET_OPTION,
) -> None:
    """Chain-type, reconstruction and removal reports over stored results."""
    with cli_errors():
        settings = setup(config, seed, None, verbose, quiet)
        manifest = Manifest.read(manifest_path)
        results = load_results(results_dir)
        if not results:
            raise ManifestError(f"No results in {results_dir}")

        truths = [manifest.get(r.entry_id).chain if r.entry_id else ChainConfig.empty() for r in results]
        reports: list[Report] = [
            eval_chain_types(results, truths),
            eval_reconstruction(results, manifest, ground_truth_dry, results_dir, settings.target_rms),
        ]
        if all(r.dry_estimate_path for r in results):
            reports.append(eval_dry_removal(results, manifest, results_dir))

        write_reports_json(out, reports)
        if per_entry is not None:
            per_entry.mkdir(parents=True, exist_ok=True)
            for report in reports:
                report.write_rows_csv(per_entry / f"{report.name}.csv")
        for report in reports:
            console.print(report.to_text(), highlight=False)
        console.print(f"[green]Report:[/green] {out}")


@app.command()
def trace(
    results_dir: Path = typer.Option(..., "--results", help="Directory of result JSON files"),
    out: Path = typer.Option(..., "--out", help="Combined trace CSV"),
    seed: Optional[int] = SEED_OPTION,
    config: Optional[Path] = CONFIG_OPTION,
    verbose: int = VERBOSE_OPTION,
    quiet: bool = QUIET_OPTION,
) -> None:
    """Export optimizer traces of stored results into one CSV."""
    with cli_errors():
        setup(config, seed, None, verbose, quiet)
        traces = []
        for result in load_results(results_dir):
            if result.trace_path is None:
                continue
            records = [record for _, record in read_trace_csv(results_dir / result.trace_path)]
            traces.append((result.entry_id or Path(result.trace_path).stem, records))
        rows = write_trace_csv(out, traces)
        console.print(f"[green]Wrote[/green] {rows} trial rows from {len(traces)} results -> {out}")


if __name__ == "__main__":
    app()
