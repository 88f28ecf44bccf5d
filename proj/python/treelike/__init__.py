"""Exact tower of metric trees with planar maps, and tree-like certificates."""

import json

from ._core import Dyadic, FormatError, Quad, level_counts, winding_number
from . import _core

__all__ = [
    "Dyadic",
    "FormatError",
    "Quad",
    "build_state",
    "decide",
    "level_counts",
    "render_svg",
    "verify_state",
    "winding_number",
]


def build_state(levels=6):
    """State file for levels 1..levels, as a dict."""
    return json.loads(_core.build_state(levels))


def _text(state):
    return state if isinstance(state, str) else json.dumps(state)


def verify_state(state, refine=None, workers=1):
    """Runs every invariant suite; returns the report dict."""
    return json.loads(_core.verify_state(_text(state), refine, workers))


def render_svg(state, level=0, scale=400, curves="gamma_n"):
    return _core.render_svg(_text(state), level, scale, curves)


def decide(points):
    """Verdict dict for a closed polygon; coordinates may be ints or strings like "3/8"."""
    return json.loads(_core.decide([(str(x), str(y)) for x, y in points]))
