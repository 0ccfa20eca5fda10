"""Trail-packing kernel with backend selection.

The compiled Cython kernel is preferred when available; the pure-Python
twin is always present.  Set ESCAPE3X3_KERNEL=py or =cy to force a backend.
Both backends return bit-identical results; the test suite compares them.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache

from . import _kernel_py
from .grid import Edge, GridGraph, Vertex
from .model import Path

_choice = os.environ.get("ESCAPE3X3_KERNEL", "").strip().lower()
if _choice in ("py", "python"):
    _impl = _kernel_py
    BACKEND = "python"
elif _choice in ("cy", "cython"):
    from . import _kernel_cy as _impl  # type: ignore[attr-defined]

    BACKEND = "cython"
else:
    try:
        from . import _kernel_cy as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernel_py
        BACKEND = "python"

FOUND = _kernel_py.FOUND
NONE = _kernel_py.NONE
BUDGET = _kernel_py.BUDGET


@dataclass(frozen=True)
class GraphDesc:
    """Index-level description of a grid graph for the kernel."""

    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]
    adj: tuple[tuple[tuple[int, int], ...], ...]

    def vertex_index(self, v: Vertex) -> int:
        return self.vertices.index(v)


@lru_cache(maxsize=None)
def desc_for(g: GridGraph) -> GraphDesc:
    vertices = g.sorted_vertices()
    edges = g.sorted_edges()
    if len(edges) > 63:
        raise ValueError("kernel supports at most 63 edges")
    vindex = {v: i for i, v in enumerate(vertices)}
    adj: list[list[tuple[int, int]]] = [[] for _ in vertices]
    for eid, (a, b) in enumerate(edges):
        adj[vindex[a]].append((vindex[b], eid))
        adj[vindex[b]].append((vindex[a], eid))
    return GraphDesc(
        vertices=vertices,
        edges=edges,
        adj=tuple(tuple(sorted(entries)) for entries in adj),
    )


def edge_mask(g: GridGraph, edges) -> int:
    desc = desc_for(g)
    eindex = {e: i for i, e in enumerate(desc.edges)}
    mask = 0
    for e in edges:
        mask |= 1 << eindex[e]
    return mask


def solve_trails(
    g: GridGraph,
    free_edges,
    endpoint_pairs,
    max_nodes: int = 0,
) -> tuple[list[Path] | None, int, bool]:
    """Find edge-disjoint trails joining the endpoint pairs, in order.

    Returns (paths | None, nodes, exhausted).  Deterministic: the
    lexicographically first trail system under sorted-vertex order.
    """
    desc = desc_for(g)
    vindex = {v: i for i, v in enumerate(desc.vertices)}
    pairs_idx = tuple((vindex[a], vindex[b]) for a, b in endpoint_pairs)
    status, trails, nodes = _impl.find_trail_system(
        desc.adj, pairs_idx, edge_mask(g, free_edges), max_nodes
    )
    if status == FOUND:
        paths = [Path(tuple(desc.vertices[i] for i in t)) for t in trails]
        return paths, nodes, False
    return None, nodes, status == BUDGET
