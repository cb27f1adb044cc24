"""
Noisy oracle: ground truth with controlled prediction errors.

Three independent knobs:
- type_flip_prob: each returned type is replaced by a uniformly chosen
  other type with this probability; in a type set the replacement is drawn
  from the types not already present, so the set keeps its size (a full
  set cannot flip)
- dry_snr_db: returned audio gets white noise at this SNR (inf disables)
- param_noise_std: returned parameters get Gaussian noise, clamped to [0, 1]

Noise is drawn from a generator keyed by (seed, call site), so a given
input always yields the same output regardless of call order.
"""

import math

import numpy as np

from fxsearch.exceptions import ArgumentError
from fxsearch.models.audio import AudioBuffer
from fxsearch.models.params import EffectParams, EffectType
from fxsearch.predictor.base import DirectPrediction, LastPrediction, Predictor
from fxsearch.predictor.oracle import OraclePredictor

DIRECT_KEY = 1000


class NoisyOraclePredictor(Predictor):
    """Oracle with injected type, audio and parameter errors."""

    name = "noisy"
    supports_direct = True
    supports_last = True
    predicts_params = True

    def __init__(
        self,
        oracle: OraclePredictor,
        type_flip_prob: float = 0.0,
        dry_snr_db: float = math.inf,
        param_noise_std: float = 0.0,
        seed: int = 0,
    ):
        """
        Initialize the noisy oracle.

        Raises:
            ArgumentError: If a knob is outside its domain
        """
        if not 0.0 <= type_flip_prob <= 1.0:
            raise ArgumentError(
                "type_flip_prob must be in [0, 1]", details={"type_flip_prob": type_flip_prob}
            )
        if math.isnan(dry_snr_db) or dry_snr_db == -math.inf:
            raise ArgumentError("dry_snr_db must be a number or +inf", details={"dry_snr_db": dry_snr_db})
        if param_noise_std < 0.0:
            raise ArgumentError(
                "param_noise_std must be non-negative", details={"param_noise_std": param_noise_std}
            )
        self.oracle = oracle
        self.type_flip_prob = type_flip_prob
        self.dry_snr_db = dry_snr_db
        self.param_noise_std = param_noise_std
        self.seed = seed

    def _rng(self, key: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, key])

    def _flip(self, effect_type: EffectType, rng: np.random.Generator) -> EffectType:
        draw = rng.random()
        others = [t for t in EffectType if t is not effect_type]
        choice = others[int(rng.integers(0, len(others)))]
        return choice if draw < self.type_flip_prob else effect_type

    def _flip_set(
        self, types: frozenset[EffectType], rng: np.random.Generator
    ) -> frozenset[EffectType]:
        present = set(types)
        for effect_type in sorted(types, key=lambda t: t.value):
            draw = rng.random()
            free = [t for t in EffectType if t not in present]
            if draw < self.type_flip_prob and free:
                present.remove(effect_type)
                present.add(free[int(rng.integers(0, len(free)))])
        return frozenset(present)

    def _add_noise(self, buf: AudioBuffer, rng: np.random.Generator) -> AudioBuffer:
        noise = rng.standard_normal(len(buf))
        if math.isinf(self.dry_snr_db):
            return buf
        signal_energy = float(np.dot(buf.samples, buf.samples))
        noise_energy = float(np.dot(noise, noise))
        if signal_energy == 0.0 or noise_energy == 0.0:
            return buf
        scale = math.sqrt(signal_energy / (noise_energy * 10.0 ** (self.dry_snr_db / 10.0)))
        return buf.with_samples(buf.samples + scale * noise)

    def _perturb(self, params: EffectParams, rng: np.random.Generator) -> EffectParams:
        noise = rng.standard_normal(len(params.values)) * self.param_noise_std
        values = np.clip(np.asarray(params.values) + noise, 0.0, 1.0)
        return EffectParams(type=params.effect_type, params_norm=values.tolist())

    def predict_direct(self, wet: AudioBuffer) -> DirectPrediction:
        truth = self.oracle.predict_direct(wet)
        rng = self._rng(DIRECT_KEY)
        types = self._flip_set(truth.types, rng)
        dry = self._add_noise(truth.dry_estimate, rng)
        return DirectPrediction(types=types, dry_estimate=dry)

    def predict_last(self, wet: AudioBuffer) -> LastPrediction:
        k = self.oracle.locate(wet)
        truth = self.oracle.predict_last(self.oracle.signals[k])
        rng = self._rng(k)
        bypass = self._add_noise(truth.bypass, rng)
        if truth.is_stop or truth.params is None:
            return LastPrediction(effect=truth.effect, params=None, bypass=bypass)

        effect = self._flip(truth.params.effect_type, rng)
        params = self._perturb(truth.params, rng)
        if effect is not params.effect_type:
            # A flipped type cannot keep the true type's parameters
            params = EffectParams.midpoint(effect)
        return LastPrediction(effect=effect, params=params, bypass=bypass)


def noisy_oracle_predictor(
    oracle: OraclePredictor,
    type_flip_prob: float,
    dry_snr_db: float,
    param_noise_std: float,
    seed: int,
) -> NoisyOraclePredictor:
    """Wrap an oracle with the three noise knobs."""
    return NoisyOraclePredictor(
        oracle,
        type_flip_prob=type_flip_prob,
        dry_snr_db=dry_snr_db,
        param_noise_std=param_noise_std,
        seed=seed,
    )
