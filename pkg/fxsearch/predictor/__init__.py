"""Prediction-stage stand-ins: oracle, noisy oracle and heuristic predictors."""

from fxsearch.predictor.base import DirectPrediction, LastPrediction, Predictor
from fxsearch.predictor.heuristic import (
    CalibrationSample,
    FeatureThreshold,
    HeuristicPredictor,
    heuristic_predictor,
)
from fxsearch.predictor.noisy import NoisyOraclePredictor, noisy_oracle_predictor
from fxsearch.predictor.oracle import OraclePredictor, load_oracle_signals, oracle_predictor

__all__ = [
    "CalibrationSample",
    "DirectPrediction",
    "FeatureThreshold",
    "HeuristicPredictor",
    "LastPrediction",
    "NoisyOraclePredictor",
    "OraclePredictor",
    "Predictor",
    "heuristic_predictor",
    "load_oracle_signals",
    "noisy_oracle_predictor",
    "oracle_predictor",
]
