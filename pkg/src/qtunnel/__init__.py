"""Quantum tunneling between potential wells on graphs."""

from __future__ import annotations

__version__ = "0.1.0"

from .graph import Graph, load_graph, read_graph
from .spectral import PotentialSpec, spectrum
from .triple import classify_triple_well
from .tunneling import SweepConfig, classify_double_well, sup_transfer, tc_curve

__all__ = [
    "Graph", "PotentialSpec", "SweepConfig", "classify_double_well", "classify_triple_well",
    "load_graph", "read_graph", "spectrum", "sup_transfer", "tc_curve", "__version__",
]
