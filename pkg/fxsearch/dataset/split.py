"""
Track-disjoint train/val/eval split.
"""

import json
import math
from pathlib import Path

import logfire
import numpy as np

from fxsearch.exceptions import ArgumentError, AudioIOError, SplitError
from fxsearch.models.manifest import Manifest, Split

DEFAULT_RATIOS = (0.80, 0.15, 0.05)
MIN_TRACKS = 3
SPLITS_NAME = "splits.json"


def split_counts(num_tracks: int, ratios: tuple[float, float, float]) -> tuple[int, int, int]:
    """
    Tracks per split.

    Val and eval are rounded half-up with at least one track each; train
    takes the remainder.
    """
    n_val = max(1, math.floor(ratios[1] * num_tracks + 0.5))
    n_eval = max(1, math.floor(ratios[2] * num_tracks + 0.5))
    n_train = num_tracks - n_val - n_eval
    if n_train < 1:
        raise SplitError(
            f"{num_tracks} tracks cannot fill three splits",
            details={"tracks": num_tracks, "ratios": list(ratios)},
        )
    return n_train, n_val, n_eval


def split(
    manifest: Manifest, ratios: tuple[float, float, float] = DEFAULT_RATIOS, seed: int = 42
) -> Manifest:
    """
    Assign every entry the split of its source track.

    Args:
        manifest: Manifest to label
        ratios: (train, val, eval) fractions of tracks, summing to 1
        seed: Shuffle seed

    Returns:
        A new manifest with split labels

    Raises:
        ArgumentError: If the ratios do not sum to 1
        SplitError: If there are fewer than three tracks
    """
    if len(ratios) != 3 or abs(sum(ratios) - 1.0) > 1e-6 or min(ratios) < 0.0:
        raise ArgumentError("Split ratios must be three non-negative fractions summing to 1",
                            details={"ratios": list(ratios)})
    tracks = sorted(manifest.track_ids())
    if len(tracks) < MIN_TRACKS:
        raise SplitError(
            f"Need at least {MIN_TRACKS} source tracks to split, got {len(tracks)}",
            details={"tracks": len(tracks)},
        )

    n_train, n_val, _ = split_counts(len(tracks), ratios)
    order = np.random.default_rng(seed).permutation(len(tracks))
    assignment: dict[str, Split] = {}
    for position, index in enumerate(order):
        if position < n_train:
            assignment[tracks[index]] = Split.TRAIN
        elif position < n_train + n_val:
            assignment[tracks[index]] = Split.VAL
        else:
            assignment[tracks[index]] = Split.EVAL

    entries = [entry.with_split(assignment[entry.track_id]) for entry in manifest.entries]
    logfire.info(
        "split assigned",
        train=n_train,
        val=n_val,
        eval=len(tracks) - n_train - n_val,
        seed=seed,
    )
    return manifest.model_copy(update={"entries": entries})


def split_assignment(manifest: Manifest) -> dict[str, list[str]]:
    """Track ids per split, sorted."""
    result: dict[str, list[str]] = {s.value: [] for s in Split}
    seen: set[str] = set()
    for entry in manifest.entries:
        if entry.split is not None and entry.track_id not in seen:
            seen.add(entry.track_id)
            result[entry.split.value].append(entry.track_id)
    return {name: sorted(ids) for name, ids in result.items()}


def write_split_assignment(manifest: Manifest, path: Path) -> None:
    """Write the track-to-split header record next to the manifest."""
    try:
        path.write_text(json.dumps(split_assignment(manifest), indent=2), encoding="utf-8")
    except OSError as e:
        raise AudioIOError(path, f"Cannot write split assignment {path}: {e}") from e
