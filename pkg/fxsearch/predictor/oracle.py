"""
Oracle predictor backed by ground-truth signals.

predict_last locates its input among the stored signals x_0 .. x_N (the
one with the highest SI-SDR against the input, so noisy copies still map
back) and answers with the stage that produced it.
"""

from collections.abc import Sequence
from pathlib import Path

import numpy as np

from fxsearch.dataset.audio_io import read_wav
from fxsearch.exceptions import ManifestError, SilentSignalError
from fxsearch.metrics.signal import si_sdr
from fxsearch.models.audio import AudioBuffer
from fxsearch.models.chain import ChainConfig
from fxsearch.models.manifest import ManifestEntry
from fxsearch.models.params import NONE_CLASS
from fxsearch.predictor.base import DirectPrediction, LastPrediction, Predictor


class OraclePredictor(Predictor):
    """Returns ground truth for a single manifest entry."""

    name = "oracle"
    supports_direct = True
    supports_last = True
    predicts_params = True

    def __init__(self, dry: AudioBuffer, chain: ChainConfig, intermediates: Sequence[AudioBuffer]):
        """
        Initialize the oracle.

        Args:
            dry: Ground-truth dry signal x_0
            chain: Ground-truth chain
            intermediates: x_1 .. x_N

        Raises:
            ManifestError: If the intermediates do not match the chain length
        """
        if len(intermediates) != chain.length:
            raise ManifestError(
                f"Oracle needs {chain.length} intermediates, got {len(intermediates)}",
                details={"chain": chain.describe()},
            )
        self.dry = dry
        self.chain = chain
        self.signals = [dry, *intermediates]

    def locate(self, wet: AudioBuffer) -> int:
        """Index k such that wet is (closest to) x_k."""
        for k in range(len(self.signals) - 1, -1, -1):
            if self.signals[k].equals(wet):
                return k
        scores = []
        for signal in self.signals:
            try:
                scores.append(si_sdr(wet, signal))
            except SilentSignalError:
                scores.append(-np.inf)
        return int(np.argmax(scores))

    def predict_direct(self, wet: AudioBuffer) -> DirectPrediction:
        return DirectPrediction(types=self.chain.type_set, dry_estimate=self.dry)

    def predict_last(self, wet: AudioBuffer) -> LastPrediction:
        k = self.locate(wet)
        if k == 0:
            return LastPrediction(effect=NONE_CLASS, params=None, bypass=self.dry)
        stage = self.chain.stages[k - 1]
        return LastPrediction(effect=stage.effect_type, params=stage, bypass=self.signals[k - 1])


def load_oracle_signals(
    entry: ManifestEntry, root: Path
) -> tuple[AudioBuffer, list[AudioBuffer], AudioBuffer]:
    """
    Load dry, intermediate and wet signals of a manifest entry.

    Raises:
        ManifestError: If an intermediate is missing
    """
    if len(entry.intermediate_paths) != entry.chain.length:
        raise ManifestError(
            f"Entry {entry.entry_id} is missing intermediates",
            details={"entry_id": entry.entry_id},
        )
    for relative in entry.intermediate_paths:
        if not (root / relative).exists():
            raise ManifestError(
                f"Entry {entry.entry_id}: intermediate {relative} not found",
                details={"entry_id": entry.entry_id, "path": relative},
            )
    dry = read_wav(root / entry.dry_path)
    intermediates = [read_wav(root / p) for p in entry.intermediate_paths]
    wet = read_wav(root / entry.wet_path)
    return dry, intermediates, wet


def oracle_predictor(entry: ManifestEntry, root: Path) -> OraclePredictor:
    """Build an oracle for a manifest entry whose files live under root."""
    dry, intermediates, _ = load_oracle_signals(entry, root)
    return OraclePredictor(dry, entry.chain, intermediates)
