"""Effect renderers and chain application."""

from fxsearch.effects.chain import RENDERERS, apply_chain, apply_effect, render_prefixes
from fxsearch.effects.chorus import apply_chorus
from fxsearch.effects.distortion import apply_distortion
from fxsearch.effects.reverb import apply_reverb

__all__ = [
    "RENDERERS",
    "apply_chain",
    "apply_chorus",
    "apply_distortion",
    "apply_effect",
    "apply_reverb",
    "render_prefixes",
]
