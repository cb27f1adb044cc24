"""Similarity objectives and evaluation metrics."""

from fxsearch.metrics.classification import exact_match, levenshtein, macro_f1, param_mae
from fxsearch.metrics.signal import DEFAULT_STFT, SI_SDR_CAP_DB, StftConfig, mr_stft, si_sdr

__all__ = [
    "DEFAULT_STFT",
    "SI_SDR_CAP_DB",
    "StftConfig",
    "exact_match",
    "levenshtein",
    "macro_f1",
    "mr_stft",
    "param_mae",
    "si_sdr",
]
