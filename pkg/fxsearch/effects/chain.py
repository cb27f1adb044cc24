"""
Effect dispatch and chain rendering.

Chain rendering conventions: the dry signal is RMS-normalized first, each
effect's output is RMS-normalized again, and the final signal is clipped
to [-1, 1] and rounded to float32 precision so in-memory renders match
what a WAV round trip stores.
"""

from collections.abc import Callable

from fxsearch.effects.chorus import apply_chorus
from fxsearch.effects.distortion import apply_distortion
from fxsearch.effects.reverb import apply_reverb
from fxsearch.exceptions import SilentSignalError
from fxsearch.models.audio import TARGET_RMS, AudioBuffer, clip, quantize_float32, rms_normalize
from fxsearch.models.chain import ChainConfig
from fxsearch.models.params import EffectParams, EffectType

EffectRenderer = Callable[[AudioBuffer, EffectParams], AudioBuffer]

RENDERERS: dict[EffectType, EffectRenderer] = {
    EffectType.CHORUS: apply_chorus,
    EffectType.DISTORTION: apply_distortion,
    EffectType.REVERB: apply_reverb,
}


def apply_effect(buf: AudioBuffer, params: EffectParams) -> AudioBuffer:
    """Render a single effect by dispatching on its type."""
    return RENDERERS[params.effect_type](buf, params)


def _finalize(buf: AudioBuffer) -> AudioBuffer:
    return quantize_float32(clip(buf))


def render_prefixes(
    dry: AudioBuffer, chain: ChainConfig, per_stage_rms: float = TARGET_RMS
) -> list[AudioBuffer]:
    """
    Render every prefix of a chain in one pass.

    Element k is bit-identical to apply_chain(dry, chain.prefix(k + 1)).

    Args:
        dry: Dry signal
        chain: Chain to render
        per_stage_rms: Level after each stage

    Returns:
        One finalized signal per stage (x_1 .. x_N)

    Raises:
        SilentSignalError: If the dry signal or an intermediate is silent
    """
    running = rms_normalize(dry, per_stage_rms)
    outputs = []
    for position, stage in enumerate(chain.stages):
        rendered = apply_effect(running, stage)
        try:
            running = rms_normalize(rendered, per_stage_rms)
        except SilentSignalError as e:
            raise SilentSignalError(
                f"Stage {position} ({stage.effect_type.value}) produced a silent signal",
                rms=e.rms,
            ) from e
        outputs.append(_finalize(running))
    return outputs


def apply_chain(
    dry: AudioBuffer, chain: ChainConfig, per_stage_rms: float = TARGET_RMS
) -> AudioBuffer:
    """
    Render a chain on a dry signal.

    Args:
        dry: Dry signal (normalized to per_stage_rms before the first stage)
        chain: Chain to apply; the empty chain is the identity pipeline
        per_stage_rms: Level after each stage

    Returns:
        Wet signal in [-1, 1]

    Raises:
        SilentSignalError: If the dry signal or an intermediate is silent
    """
    if chain.is_empty:
        return _finalize(rms_normalize(dry, per_stage_rms))
    outputs = render_prefixes(dry, chain, per_stage_rms)
    return outputs[-1]
