"""
Evaluation reports.

A report maps metric names to {mean, median, count} summaries and keeps the
per-entry rows it was computed from. Reports render as JSON and as an
aligned text table.
"""

import csv
import io
import json
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel, Field
from rich.console import Console
from rich.table import Table

from fxsearch.exceptions import AudioIOError


class MetricSummary(BaseModel):
    """Aggregate of one metric; mean and median are None when nothing was counted."""

    mean: float | None = Field(description="Arithmetic mean")
    median: float | None = Field(description="Median")
    count: int = Field(description="Number of contributing entries")

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "MetricSummary":
        if not values:
            return cls(mean=None, median=None, count=0)
        arr = np.asarray(values, dtype=np.float64)
        return cls(mean=float(arr.mean()), median=float(np.median(arr)), count=len(values))

    @classmethod
    def aggregate(cls, value: float, count: int) -> "MetricSummary":
        """Summary of a corpus-level metric such as macro F1."""
        return cls(mean=value, median=value, count=count)


class Report(BaseModel):
    """Named set of metric summaries plus the rows behind them."""

    name: str = Field(description="Report name, e.g. 'reconstruction'")
    metrics: dict[str, MetricSummary] = Field(default_factory=dict)
    annotations: dict[str, dict[str, float]] = Field(
        default_factory=dict, description="Reference points for orientation, not targets"
    )
    rows: list[dict[str, Any]] = Field(default_factory=list, description="Per-entry values")
    excluded: int = Field(default=0, description="Entries left out by the exclusion rule")

    def to_json_dict(self) -> dict[str, dict[str, Any]]:
        """{metric_name: {mean, median, count}}."""
        return {name: summary.model_dump() for name, summary in self.metrics.items()}

    def to_text(self) -> str:
        """Aligned-column rendering."""
        table = Table(title=self.name, show_edge=False)
        table.add_column("metric", style="cyan")
        table.add_column("mean", justify="right")
        table.add_column("median", justify="right")
        table.add_column("count", justify="right")
        for name, summary in self.metrics.items():
            table.add_row(
                name,
                _fmt(summary.mean),
                _fmt(summary.median),
                str(summary.count),
            )
        for label, values in self.annotations.items():
            for name, value in values.items():
                table.add_row(f"  ref {label} {name}", _fmt(value), "", "", style="dim")

        buffer = io.StringIO()
        Console(file=buffer, width=100, no_color=True).print(table)
        return buffer.getvalue()

    def write_rows_csv(self, path: Path) -> None:
        """
        Dump the per-entry rows.

        Raises:
            AudioIOError: If the file cannot be written
        """
        columns: list[str] = []
        for row in self.rows:
            for key in row:
                if key not in columns:
                    columns.append(key)
        try:
            with path.open("w", newline="", encoding="utf-8") as fh:
                writer = csv.DictWriter(fh, fieldnames=columns)
                writer.writeheader()
                writer.writerows(self.rows)
        except OSError as e:
            raise AudioIOError(path, f"Cannot write per-entry CSV {path}: {e}") from e


def _fmt(value: float | None) -> str:
    return "-" if value is None else f"{value:.4f}"


def reports_to_json(reports: Iterable[Report]) -> dict[str, Any]:
    """
    Combined document: one metric map per report, annotations alongside.

    {"<report>": {metric: {mean, median, count}}, ..., "annotations": {"<report>": {...}}}
    """
    document: dict[str, Any] = {}
    annotations: dict[str, Any] = {}
    for report in reports:
        document[report.name] = report.to_json_dict()
        if report.annotations:
            annotations[report.name] = report.annotations
    if annotations:
        document["annotations"] = annotations
    return document


def write_reports_json(path: Path, reports: Iterable[Report]) -> None:
    try:
        path.write_text(json.dumps(reports_to_json(reports), indent=2), encoding="utf-8")
    except OSError as e:
        raise AudioIOError(path, f"Cannot write report {path}: {e}") from e


def annotate(report: Report, references: Mapping[str, dict[str, float]]) -> Report:
    return report.model_copy(update={"annotations": dict(references)})
