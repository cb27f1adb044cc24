"""
Dataset manifest models.

A manifest is a JSON Lines file, one ManifestEntry per line. Paths are
stored relative to the manifest file's directory.
"""

import json
from enum import Enum
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator

from fxsearch.exceptions import AudioIOError, ManifestError
from fxsearch.models.chain import ChainConfig


class Split(str, Enum):
    """Dataset partition."""

    TRAIN = "train"
    VAL = "val"
    EVAL = "eval"


class ManifestEntry(BaseModel):
    """
    One rendered (or empty-chain) entry.

    intermediate_paths[k] holds x_{k+1}; the last one is the wet signal
    itself. Empty-chain entries have no intermediates and their wet signal
    is the normalized dry chunk.
    """

    model_config = ConfigDict(frozen=True)

    entry_id: str = Field(description="Unique entry identifier")
    dry_id: str = Field(description="Identifier of the dry chunk")
    track_id: str = Field(description="Source track the dry chunk was cut from")
    chain: ChainConfig = Field(description="Ground-truth chain")
    dry_path: str = Field(description="Dry chunk WAV, relative to the manifest")
    wet_path: str = Field(description="Wet WAV, relative to the manifest")
    intermediate_paths: tuple[str, ...] = Field(
        default_factory=tuple, description="x_1 .. x_N WAVs, relative to the manifest"
    )
    split: Split | None = Field(default=None, description="Assigned partition")
    is_empty_chain: bool = Field(default=False, description="True for N = 0 entries")

    @field_validator("chain", mode="before")
    @classmethod
    def parse_chain(cls, v: Any) -> Any:
        if isinstance(v, dict):
            return ChainConfig.from_json_dict(v)
        return v

    @field_serializer("chain")
    def serialize_chain(self, chain: ChainConfig) -> dict[str, Any]:
        return chain.to_json_dict()

    @model_validator(mode="after")
    def check_consistency(self) -> "ManifestEntry":
        """Intermediates match the chain; ground truth never repeats a type."""
        if len(self.intermediate_paths) != self.chain.length:
            raise ManifestError(
                f"Entry {self.entry_id}: {len(self.intermediate_paths)} intermediates "
                f"for chain of length {self.chain.length}",
                details={"entry_id": self.entry_id},
            )
        if not self.chain.has_distinct_types:
            raise ManifestError(
                f"Entry {self.entry_id}: ground-truth chain repeats a type",
                details={"entry_id": self.entry_id, "chain": self.chain.describe()},
            )
        if self.is_empty_chain != self.chain.is_empty:
            raise ManifestError(
                f"Entry {self.entry_id}: is_empty_chain flag disagrees with chain",
                details={"entry_id": self.entry_id},
            )
        return self

    def with_split(self, split: Split) -> "ManifestEntry":
        return self.model_copy(update={"split": split})


class Manifest(BaseModel):
    """All entries of a generated corpus plus the directory they live in."""

    root: Path = Field(description="Directory containing the manifest file")
    entries: list[ManifestEntry] = Field(default_factory=list)
    warnings: list[dict[str, Any]] = Field(
        default_factory=list, description="Skipped chunks and renders"
    )

    def resolve(self, relative: str) -> Path:
        """Absolute path of a manifest-relative path."""
        return self.root / relative

    def by_id(self) -> dict[str, ManifestEntry]:
        return {entry.entry_id: entry for entry in self.entries}

    def get(self, entry_id: str) -> ManifestEntry:
        for entry in self.entries:
            if entry.entry_id == entry_id:
                return entry
        raise ManifestError(f"Entry not found: {entry_id}", details={"entry_id": entry_id})

    def in_split(self, split: Split) -> list[ManifestEntry]:
        return [entry for entry in self.entries if entry.split == split]

    def track_ids(self) -> list[str]:
        """Distinct source tracks in first-seen order."""
        return list(dict.fromkeys(entry.track_id for entry in self.entries))

    def write(self, path: Path) -> None:
        """
        Write the manifest as JSON Lines.

        Raises:
            AudioIOError: If the file cannot be written
        """
        try:
            with path.open("w", encoding="utf-8") as fh:
                for entry in self.entries:
                    fh.write(json.dumps(entry.model_dump(mode="json")) + "\n")
            if self.warnings:
                warnings_path = path.with_suffix(".warnings.json")
                warnings_path.write_text(json.dumps(self.warnings, indent=2), encoding="utf-8")
        except OSError as e:
            raise AudioIOError(path, f"Cannot write manifest {path}: {e}") from e

    @classmethod
    def read(cls, path: Path) -> "Manifest":
        """
        Read a JSON Lines manifest.

        Raises:
            AudioIOError: If the file cannot be read
            ManifestError: If a line is not a valid entry
        """
        try:
            lines = path.read_text(encoding="utf-8").splitlines()
        except OSError as e:
            raise AudioIOError(path, f"Cannot read manifest {path}: {e}") from e

        entries = []
        for lineno, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            try:
                entries.append(ManifestEntry.model_validate(json.loads(line)))
            except json.JSONDecodeError as e:
                raise ManifestError(
                    f"{path}:{lineno}: invalid JSON", details={"error": str(e)}
                ) from e

        warnings: list[dict[str, Any]] = []
        warnings_path = path.with_suffix(".warnings.json")
        if warnings_path.exists():
            warnings = json.loads(warnings_path.read_text(encoding="utf-8"))

        return cls(root=path.parent, entries=entries, warnings=warnings)
