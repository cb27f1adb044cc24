"""
Trial trace CSV export.

Columns: entry_id, stage, trial_index, x0 .. x{d-1}, score. Traces with
different dimensions can share one file; short candidates leave trailing
component cells empty.
"""

import csv
from collections.abc import Iterable, Sequence
from pathlib import Path

from fxsearch.exceptions import AudioIOError
from fxsearch.models.results import TrialRecord


def write_trace_csv(
    path: Path,
    traces: Iterable[tuple[str, Sequence[TrialRecord]]],
) -> int:
    """
    Write one or more traces to a CSV file.

    Args:
        path: Output CSV path
        traces: (entry_id, trials) pairs

    Returns:
        Number of rows written

    Raises:
        AudioIOError: If the file cannot be written
    """
    materialized = [(entry_id, list(trials)) for entry_id, trials in traces]
    width = max(
        (len(t.candidate) for _, trials in materialized for t in trials),
        default=0,
    )
    header = ["entry_id", "stage", "trial_index", *[f"x{i}" for i in range(width)], "score"]

    rows = 0
    try:
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for entry_id, trials in materialized:
                for trial in trials:
                    components = [repr(v) for v in trial.candidate]
                    components += [""] * (width - len(components))
                    writer.writerow(
                        [entry_id, trial.stage, trial.index, *components, repr(trial.score)]
                    )
                    rows += 1
    except OSError as e:
        raise AudioIOError(path, f"Cannot write trace {path}: {e}") from e
    return rows


def read_trace_csv(path: Path) -> list[tuple[str, TrialRecord]]:
    """
    Read a trace CSV written by write_trace_csv.

    Raises:
        AudioIOError: If the file cannot be read
    """
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            records = []
            for row in reader:
                components = [
                    float(row[key])
                    for key in reader.fieldnames or []
                    if key.startswith("x") and row[key] != ""
                ]
                records.append(
                    (
                        row["entry_id"],
                        TrialRecord(
                            index=int(row["trial_index"]),
                            candidate=tuple(components),
                            score=float(row["score"]),
                            stage=row["stage"],
                        ),
                    )
                )
    except OSError as e:
        raise AudioIOError(path, f"Cannot read trace {path}: {e}") from e
    return records
