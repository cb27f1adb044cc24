"""
Corpus generation: chain enumeration and wet/intermediate rendering.

Per dry chunk, every ordered sequence of one to three distinct effect types
gets one parameter draw; each sequence of length n contributes its n
prefixes as entries, 33 in total. Eleven empty-chain entries per chunk
reuse the normalized dry chunk as their wet signal.

Layout under out_dir:
    manifest.jsonl
    audio/<dry_id>/dry.wav
    audio/<dry_id>/s<seq>_<prefix>.wav
"""

import itertools
import os
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any

import logfire
import numpy as np

from fxsearch.dataset.audio_io import write_wav
from fxsearch.dataset.ingest import DryChunk
from fxsearch.effects.chain import render_prefixes
from fxsearch.exceptions import SilentSignalError
from fxsearch.models.audio import TARGET_RMS
from fxsearch.models.chain import MAX_CHAIN_LENGTH, ChainConfig
from fxsearch.models.manifest import Manifest, ManifestEntry
from fxsearch.models.params import EffectParams, EffectType, dimension
from fxsearch.observability import configure_logging

EMPTY_ENTRIES_PER_CHUNK = 11
MANIFEST_NAME = "manifest.jsonl"
AUDIO_DIR = "audio"


def chunk_rng(seed: int, ordinal: int) -> np.random.Generator:
    """Generator for the ordinal-th dry chunk of a run."""
    return np.random.default_rng(np.random.SeedSequence([seed, ordinal]))


def enumerate_sequences(rng: np.random.Generator) -> list[ChainConfig]:
    """
    All ordered sequences of 1..3 distinct types, each with fresh uniform parameters.

    Order is by length, then lexicographic over (Chorus, Distortion, Reverb).
    Uniform draws in normalized space are uniform in raw units since the
    mapping is affine.
    """
    sequences = []
    for length in range(1, MAX_CHAIN_LENGTH + 1):
        for types in itertools.permutations(list(EffectType), length):
            stages = [
                EffectParams(type=t, params_norm=rng.uniform(0.0, 1.0, dimension(t)).tolist())
                for t in types
            ]
            sequences.append(ChainConfig.distinct(stages))
    return sequences


def expand_prefixes(sequences: Sequence[ChainConfig]) -> list[ChainConfig]:
    """Each sequence of length n contributes its n prefixes."""
    return [seq.prefix(n) for seq in sequences for n in range(1, seq.length + 1)]


def enumerate_chains(rng_seed: int) -> list[ChainConfig]:
    """
    The 33 chains rendered for one dry chunk.

    Args:
        rng_seed: Seed of the parameter draws

    Returns:
        15 sequences expanded into their prefixes (3 + 12 + 18 entries)
    """
    return expand_prefixes(enumerate_sequences(np.random.default_rng(rng_seed)))


def _render_chunk(
    chunk: DryChunk, ordinal: int, out_dir: Path, seed: int, target_rms: float
) -> tuple[list[ManifestEntry], list[dict[str, Any]]]:
    """Render and store all entries of one chunk."""
    dry_id = chunk.dry_id
    chunk_dir = Path(AUDIO_DIR) / dry_id
    dry_path = (chunk_dir / "dry.wav").as_posix()
    write_wav(out_dir / dry_path, chunk.audio)

    entries: list[ManifestEntry] = []
    warnings: list[dict[str, Any]] = []
    for seq_index, sequence in enumerate(enumerate_sequences(chunk_rng(seed, ordinal))):
        try:
            rendered = render_prefixes(chunk.audio, sequence, target_rms)
        except SilentSignalError as e:
            logfire.warn(
                "skipping silent render",
                dry_id=dry_id,
                sequence=sequence.describe(),
                error=e.message,
            )
            warnings.append(
                {
                    "kind": "silent_render",
                    "dry_id": dry_id,
                    "sequence_index": seq_index,
                    "chain": sequence.describe(),
                    "reason": e.message,
                }
            )
            continue

        paths: list[str] = []
        for n, audio in enumerate(rendered, start=1):
            prefix = sequence.prefix(n)
            code = "".join(t.short for t in prefix.types)
            wet_path = (chunk_dir / f"s{seq_index:02d}_{code}.wav").as_posix()
            write_wav(out_dir / wet_path, audio)
            paths.append(wet_path)
            entries.append(
                ManifestEntry(
                    entry_id=f"{dry_id}_s{seq_index:02d}_{code}",
                    dry_id=dry_id,
                    track_id=chunk.track_id,
                    chain=prefix,
                    dry_path=dry_path,
                    wet_path=wet_path,
                    intermediate_paths=tuple(paths),
                )
            )

    for j in range(EMPTY_ENTRIES_PER_CHUNK):
        entries.append(
            ManifestEntry(
                entry_id=f"{dry_id}_e{j:02d}",
                dry_id=dry_id,
                track_id=chunk.track_id,
                chain=ChainConfig.empty(),
                dry_path=dry_path,
                wet_path=dry_path,
                is_empty_chain=True,
            )
        )
    return entries, warnings


def generate(
    dry_chunks: Sequence[DryChunk],
    out_dir: Path,
    seed: int,
    jobs: int | None = None,
    target_rms: float = TARGET_RMS,
    warnings: Sequence[dict[str, Any]] = (),
    verbosity: int = 0,
) -> Manifest:
    """
    Render the corpus and write its manifest.

    Args:
        dry_chunks: Normalized dry chunks
        out_dir: Output directory (created if missing)
        seed: Run seed; chunk i draws from a generator derived from (seed, i)
        jobs: Worker processes (None = CPU count, 1 = in-process)
        target_rms: Per-stage level
        warnings: Earlier warning records (e.g. from ingestion) to carry into the manifest
        verbosity: Console verbosity configured in each worker process

    Returns:
        The written manifest (no split labels yet)

    Raises:
        AudioIOError: If a file cannot be written
    """
    out_dir.mkdir(parents=True, exist_ok=True)
    workers = jobs or os.cpu_count() or 1

    with logfire.span("generate corpus", chunks=len(dry_chunks), seed=seed, jobs=workers):
        if workers == 1 or len(dry_chunks) <= 1:
            results = [
                _render_chunk(chunk, i, out_dir, seed, target_rms) for i, chunk in enumerate(dry_chunks)
            ]
        else:
            with ProcessPoolExecutor(
                max_workers=workers, initializer=configure_logging, initargs=(verbosity,)
            ) as pool:
                futures = [
                    pool.submit(_render_chunk, chunk, i, out_dir, seed, target_rms)
                    for i, chunk in enumerate(dry_chunks)
                ]
                results = [f.result() for f in futures]

        entries: list[ManifestEntry] = []
        collected: list[dict[str, Any]] = list(warnings)
        for chunk_entries, chunk_warnings in results:
            entries.extend(chunk_entries)
            collected.extend(chunk_warnings)

        manifest = Manifest(root=out_dir, entries=entries, warnings=collected)
        manifest.write(out_dir / MANIFEST_NAME)

    logfire.info(
        "corpus written",
        entries=len(entries),
        empty=sum(e.is_empty_chain for e in entries),
        warnings=len(collected),
    )
    return manifest
