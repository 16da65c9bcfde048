"""Curated graphs and well placements used by the verification suites.

Each instance is frozen: the graph, the wells, the query and the window rule
are fixed, and the Partial/None double-well instances are the smallest hits
of the exhaustive search in ``scripts/search_instances.py``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .graph import Graph, cycle_graph, from_edges, path_graph, y_graph


@dataclass(frozen=True)
class Instance:
    name: str
    build: Callable[[], Graph]
    wells: tuple[int, ...]
    start: int
    target: int
    window_exp: float
    schedule: tuple[float, ...] = (1e2, 10 ** 2.5, 1e3)
    note: str = ""

    def graph(self) -> Graph:
        return self.build()


def _y(arms):
    return lambda: y_graph(arms)[0]


def _y_wells(arms):
    return y_graph(arms)[1]


def _c8_pendant() -> Graph:
    # the pendant raises deg(1), so the two geodesics from the apex 0 differ
    return from_edges(9, [(i, (i + 1) % 8) for i in range(8)] + [(1, 8)])


DOUBLE_PERFECT = Instance("P3-ends", lambda: path_graph(3), (0, 2), 0, 2, 1.0,
                          note="wells swapped by the reflection")
DOUBLE_PARTIAL = Instance("P4-0-2", lambda: path_graph(4), (0, 2), 0, 2, 1.0,
                          note="co = d - 1 = 1; predicted 8/9; isomorphic to the search hit")
DOUBLE_NONE = Instance("spider-0-1", lambda: from_edges(5, [(0, 4), (1, 3), (2, 3), (3, 4)]), (0, 1), 0, 1, 2.0,
                       note="co = 1 < d - 1 = 2; the search hit itself")
TRICHOTOMY = (DOUBLE_PERFECT, DOUBLE_PARTIAL, DOUBLE_NONE)

Y333 = Instance("Y(3,3,3)", _y((3, 3, 3)), _y_wells((3, 3, 3)), _y_wells((3, 3, 3))[1],
                _y_wells((3, 3, 3))[2], 2.0, (1e3, 10 ** 3.25, 10 ** 3.5))
Y233 = Instance("Y(2,3,3)", _y((2, 3, 3)), _y_wells((2, 3, 3)), _y_wells((2, 3, 3))[1],
                _y_wells((2, 3, 3))[2], 2.0, (1e2, 10 ** 2.5, 1e3))

MIXED_APEX = Instance("C8-apex", lambda: cycle_graph(8), (0, 2, 6), 0, 2, 1.0,
                      note="a = b = 2 < c = 4, started at the apex")
APEX_EQUAL = Instance("C8-far", lambda: cycle_graph(8), (0, 2, 6), 2, 6, 1.0,
                      note="c_xy = c_xz by the reflection through 0")
APEX_UNEQUAL = Instance("C8+pendant-far", _c8_pendant, (0, 2, 6), 2, 6, 1.0,
                        note="pendant on vertex 1 makes c_xy != c_xz")

ALL = {inst.name: inst for inst in (*TRICHOTOMY, Y333, Y233, MIXED_APEX, APEX_EQUAL, APEX_UNEQUAL)}


def three_level_graph() -> Graph:
    """Fixed 8-vertex graph for the first-order spectral checks."""
    edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 0), (0, 4), (2, 6), (1, 5)]
    return from_edges(8, edges)


THREE_LEVEL_WEIGHTS = (1.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0)
