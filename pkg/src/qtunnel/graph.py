"""Finite simple connected graphs, the text file format, and a few builders."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence


class GraphError(ValueError):
    """Base class for invalid graph input."""


class EmptyGraphError(GraphError):
    pass


class LoopEdgeError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class DisconnectedGraphError(GraphError):
    pass


class GraphFormatError(GraphError):
    pass


@dataclass(frozen=True)
class Graph:
    """Undirected simple connected graph on vertices ``0..n-1``.

    ``edges`` keeps the input order (each edge as ``(min, max)``) so the
    file round-trip is exact; ``neighbors`` is sorted per vertex.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    neighbors: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)

    @property
    def degree(self) -> tuple[int, ...]:
        return tuple(len(nb) for nb in self.neighbors)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.neighbors[u]

    def check_vertex(self, v: int) -> int:
        if not isinstance(v, int) or not 0 <= v < self.n:
            raise IndexError(f"vertex {v!r} not in graph with {self.n} vertices")
        return v

    def distances_from(self, source: int) -> list[int]:
        self.check_vertex(source)
        dist = [-1] * self.n
        dist[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for w in self.neighbors[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def diameter(self) -> int:
        return max(max(self.distances_from(v)) for v in range(self.n))


def _build(n: int, edges: Sequence[tuple[int, int]]) -> Graph:
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        nbrs[u].add(v)
        nbrs[v].add(u)
    g = Graph(n, tuple(edges), tuple(tuple(sorted(s)) for s in nbrs))
    if n > 1 and min(g.distances_from(0)) < 0:
        raise DisconnectedGraphError("graph is not connected")
    if n == 1:
        raise DisconnectedGraphError("a single vertex has degree 0")
    return g


def _check_edges(edges: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    seen: set[tuple[int, int]] = set()
    out = []
    for u, v in edges:
        if u == v:
            raise LoopEdgeError(f"loop edge ({u}, {v})")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdgeError(f"duplicate edge ({u}, {v})")
        seen.add(key)
        out.append(key)
    return out


def load_graph(edge_list: Sequence[tuple[int, int]]) -> Graph:
    """Build a graph from an edge list.

    Vertex ids are renumbered densely in order of first appearance.
    """
    edge_list = [(int(u), int(v)) for u, v in edge_list]
    if not edge_list:
        raise EmptyGraphError("empty edge list")
    for u, v in edge_list:
        if u < 0 or v < 0:
            raise GraphFormatError(f"negative vertex id in ({u}, {v})")
    edges = _check_edges(edge_list)
    relabel: dict[int, int] = {}
    for u, v in edge_list:
        for w in (u, v):
            relabel.setdefault(w, len(relabel))
    dense = [(min(relabel[u], relabel[v]), max(relabel[u], relabel[v])) for u, v in edges]
    return _build(len(relabel), dense)


def from_edges(n: int, edges: Sequence[tuple[int, int]]) -> Graph:
    """Build a graph on exactly the vertices ``0..n-1`` (no relabeling)."""
    if n <= 0 or not edges:
        raise EmptyGraphError("empty graph")
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"edge ({u}, {v}) out of range for n={n}")
    return _build(n, _check_edges(edges))


# -- file format -------------------------------------------------------------

def parse_graph_text(text: str) -> Graph:
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    if not rows:
        raise EmptyGraphError("empty graph file")
    try:
        header = [int(t) for t in rows[0]]
        if len(header) != 2:
            raise ValueError
        n, m = header
        edges = []
        for r in rows[1:]:
            if len(r) != 2:
                raise ValueError
            edges.append((int(r[0]), int(r[1])))
    except ValueError as exc:
        raise GraphFormatError("expected 'n m' header followed by 'u v' lines") from exc
    if len(edges) != m:
        raise GraphFormatError(f"header declares {m} edges, found {len(edges)}")
    return from_edges(n, edges)


def format_graph_text(g: Graph) -> str:
    lines = [f"{g.n} {len(g.edges)}"] + [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def read_graph(path: str | Path) -> Graph:
    return parse_graph_text(Path(path).read_text(encoding="utf-8"))


def write_graph(g: Graph, path: str | Path) -> None:
    Path(path).write_text(format_graph_text(g), encoding="utf-8")


# -- builders ----------------------------------------------------------------

def path_graph(n: int) -> Graph:
    return from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star_graph(leaves: int) -> Graph:
    return from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def y_graph(arms: Sequence[int]) -> tuple[Graph, tuple[int, ...]]:
    """Paths of the given edge lengths glued at a hub ``0``.

    Returns the graph and the hub's neighbors (one per arm, in arm order).
    """
    edges = []
    firsts = []
    n = 1
    for length in arms:
        if length < 1:
            raise ValueError("arm lengths must be >= 1")
        prev = 0
        for j in range(length):
            edges.append((prev, n))
            if j == 0:
                firsts.append(n)
            prev = n
            n += 1
    return from_edges(n, edges), tuple(firsts)


def to_networkx(g: Graph):
    import networkx as nx

    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


def find_automorphism(g: Graph, forced: dict[int, int]) -> dict[int, int] | None:
    """An automorphism extending the partial vertex map ``forced``, if any."""
    from networkx.algorithms.isomorphism import GraphMatcher

    h = to_networkx(g)
    src = {v: -1 for v in range(g.n)}
    dst = {v: -1 for v in range(g.n)}
    for i, (a, b) in enumerate(forced.items()):
        src[a] = i
        dst[b] = i
    h1, h2 = h.copy(), h.copy()
    for v in range(g.n):
        h1.nodes[v]["tag"] = src[v]
        h2.nodes[v]["tag"] = dst[v]
    gm = GraphMatcher(h1, h2, node_match=lambda a, b: a["tag"] == b["tag"])
    for mapping in gm.isomorphisms_iter():
        return dict(mapping)
    return None
