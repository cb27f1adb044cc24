"""Evaluation harness: chain type, reconstruction and removal reports."""

from fxsearch.evaluation.protocol import (
    eval_bypass_removal,
    eval_chain_types,
    eval_dry_removal,
    eval_last_params,
    eval_reconstruction,
    eval_signal,
    eval_single_type,
    load_dry_estimate,
)
from fxsearch.evaluation.references import REFERENCE_POINTS
from fxsearch.evaluation.report import MetricSummary, Report, reports_to_json, write_reports_json

__all__ = [
    # Reports
    "MetricSummary",
    "REFERENCE_POINTS",
    "Report",
    "reports_to_json",
    "write_reports_json",
    # Protocol
    "eval_bypass_removal",
    "eval_chain_types",
    "eval_dry_removal",
    "eval_last_params",
    "eval_reconstruction",
    "eval_signal",
    "eval_single_type",
    "load_dry_estimate",
]
