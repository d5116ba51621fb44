"""Built-in networks addressable by name from the CLI and configs."""

from __future__ import annotations

from . import timefuncs
from .errors import InvalidInputError
from .graph import ContinuousTemporalNetwork

__all__ = ["synthetic_five_node", "preset", "PRESET_NAMES"]


def synthetic_five_node() -> ContinuousTemporalNetwork:
    """Non-directed five-node network on [0, 1] with smooth edge profiles.

    Every edge weight is an expression over the function vocabulary, so
    the preset serializes and its integrals admit closed forms, which
    makes it the standard fixture for convergence and quadrature studies.
    """
    sources = {
        (1, 2): "0.5*(sin(2*pi*t)+1)",
        (1, 4): "0.5*(cos(2*pi*t)+1)",
        (2, 3): "1-(t-1)^2",
        (2, 5): "t^2",
        (3, 4): "(exp(t)-1)/e",
        (3, 5): "0.5",
    }
    edges = {(i - 1, j - 1): timefuncs.parse(source)
             for (i, j), source in sources.items()}
    return ContinuousTemporalNetwork(n=5, interval=(0.0, 1.0), edges=edges,
                                     symmetric=True)


#: registry of preset constructors, keyed by their public CLI names
_PRESETS = {
    "paper-synthetic": synthetic_five_node,
}

PRESET_NAMES = tuple(sorted(_PRESETS))


def preset(name: str) -> ContinuousTemporalNetwork:
    """Instantiate a named preset network."""
    try:
        build = _PRESETS[name]
    except KeyError:
        known = ", ".join(PRESET_NAMES)
        raise InvalidInputError(f"unknown preset {name!r} (known: {known})") from None
    return build()
