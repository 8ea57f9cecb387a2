"""Load exported equivariant spanning sets and use them as trainable torch layers.

The export file is the only source of the matrices; nothing here rebuilds
them from diagrams.
"""

from .loader import FORMAT_VERSION, ExportError, LoadedSpanningSet, load
from .layer import EquivariantLayer, activation

__all__ = [
    "FORMAT_VERSION",
    "EquivariantLayer",
    "ExportError",
    "LoadedSpanningSet",
    "activation",
    "load",
]
