"""Corpus generation: ingestion, chain enumeration, rendering and splits."""

from fxsearch.dataset.audio_io import read_wav, write_wav
from fxsearch.dataset.generate import (
    EMPTY_ENTRIES_PER_CHUNK,
    MANIFEST_NAME,
    enumerate_chains,
    enumerate_sequences,
    generate,
)
from fxsearch.dataset.ingest import CHUNK_SAMPLES, DryChunk, chunks_from_tracks, ingest_dry
from fxsearch.dataset.split import DEFAULT_RATIOS, split, split_assignment, write_split_assignment
from fxsearch.dataset.synthetic import synthetic_track, synthetic_tracks

__all__ = [
    # Audio files
    "read_wav",
    "write_wav",
    # Ingestion
    "CHUNK_SAMPLES",
    "DryChunk",
    "chunks_from_tracks",
    "ingest_dry",
    "synthetic_track",
    "synthetic_tracks",
    # Generation
    "EMPTY_ENTRIES_PER_CHUNK",
    "MANIFEST_NAME",
    "enumerate_chains",
    "enumerate_sequences",
    "generate",
    # Splits
    "DEFAULT_RATIOS",
    "split",
    "split_assignment",
    "write_split_assignment",
]
