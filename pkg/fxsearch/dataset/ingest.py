"""
Dry audio ingestion: mono 44.1 kHz files cut into 10 s chunks.
"""

from collections.abc import Sequence
from pathlib import Path

import logfire
from pydantic import BaseModel, ConfigDict, Field

from fxsearch.dataset.audio_io import AUDIO_SUFFIXES, read_wav
from fxsearch.exceptions import IngestionError
from fxsearch.models.audio import TARGET_RMS, AudioBuffer, quantize_float32, rms_normalize

CHUNK_SAMPLES = 441_000
MIN_CHUNK_RMS = 1e-4


class DryChunk(BaseModel):
    """One non-overlapping 10 s chunk of a source track, level-normalized and float32-rounded."""

    model_config = ConfigDict(frozen=True)

    track_id: str = Field(description="Source track (file) identifier")
    chunk_index: int = Field(description="Position of the chunk within its track")
    audio: AudioBuffer

    @property
    def dry_id(self) -> str:
        return f"{self.track_id}_c{self.chunk_index:03d}"


def track_id_for(path: Path, root: Path) -> str:
    """Path-safe identifier from the file's location under root."""
    relative = path.relative_to(root).with_suffix("")
    return "__".join(relative.parts)


def chunk_track(
    track_id: str, audio: AudioBuffer, target_rms: float = TARGET_RMS
) -> tuple[list[DryChunk], list[dict[str, object]]]:
    """
    Cut one track into normalized chunks.

    Returns:
        (chunks, warnings) where warnings record skipped silent chunks
    """
    chunks = []
    warnings: list[dict[str, object]] = []
    for index in range(len(audio) // CHUNK_SAMPLES):
        piece = audio.with_samples(audio.samples[index * CHUNK_SAMPLES : (index + 1) * CHUNK_SAMPLES])
        rms = piece.rms()
        if rms < MIN_CHUNK_RMS:
            logfire.warn("skipping silent chunk", track_id=track_id, chunk_index=index, rms=rms)
            warnings.append(
                {"kind": "silent_chunk", "track_id": track_id, "chunk_index": index, "rms": rms}
            )
            continue
        chunks.append(
            DryChunk(
                track_id=track_id,
                chunk_index=index,
                audio=quantize_float32(rms_normalize(piece, target_rms)),
            )
        )
    return chunks, warnings


def list_audio_files(dir_path: Path) -> list[Path]:
    """Audio files below dir_path in sorted order."""
    return sorted(p for p in dir_path.rglob("*") if p.is_file() and p.suffix.lower() in AUDIO_SUFFIXES)


def ingest_dry(
    dir_path: Path,
    target_rms: float = TARGET_RMS,
    warnings: list[dict[str, object]] | None = None,
) -> list[DryChunk]:
    """
    Ingest every audio file below a directory.

    Args:
        dir_path: Directory of dry recordings
        target_rms: Level of each emitted chunk
        warnings: Receives one record per skipped silent chunk

    Returns:
        Chunks in (file, position) order

    Raises:
        IngestionError: If the directory holds no audio or a file is not 44.1 kHz
        AudioIOError: If a file cannot be read
    """
    if not dir_path.is_dir():
        raise IngestionError(f"Not a directory: {dir_path}", details={"path": str(dir_path)})
    files = list_audio_files(dir_path)
    if not files:
        raise IngestionError(f"No audio files in {dir_path}", details={"path": str(dir_path)})

    chunks: list[DryChunk] = []
    with logfire.span("ingest dry audio", directory=str(dir_path), files=len(files)):
        for path in files:
            track_chunks, skipped = chunk_track(track_id_for(path, dir_path), read_wav(path), target_rms)
            chunks.extend(track_chunks)
            if warnings is not None:
                warnings.extend(skipped)
            logfire.debug("ingested {path}", path=str(path), chunks=len(track_chunks))
    logfire.info("ingestion complete", files=len(files), chunks=len(chunks))
    return chunks


def chunks_from_tracks(
    tracks: Sequence[tuple[str, AudioBuffer]], target_rms: float = TARGET_RMS
) -> list[DryChunk]:
    """Chunk in-memory tracks (e.g. synthetic ones) the same way files are chunked."""
    chunks: list[DryChunk] = []
    for track_id, audio in tracks:
        track_chunks, _ = chunk_track(track_id, audio, target_rms)
        chunks.extend(track_chunks)
    return chunks
