"""The 3x3 corner grid, its boundary structure, and the diagonal symmetry.

Vertices are (row, col) pairs, 1-indexed, matching a matrix layout: row 3 is
the last row, column 3 the last column.  The grid is the corner of a quarter
plane, so escape exits live on the union of the last row and last column.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

Vertex = tuple[int, int]
Edge = tuple[Vertex, Vertex]

GRID_SIZE = 3
ALL_VERTICES: tuple[Vertex, ...] = tuple(
    (r, c) for r in range(1, GRID_SIZE + 1) for c in range(1, GRID_SIZE + 1)
)

CORNER: Vertex = (3, 3)

# Boundary path in walking order: down the last column, then along the last
# row toward column 1.  unique_l_path and shifts follow this order.
L_ORDER: tuple[Vertex, ...] = ((1, 3), (2, 3), (3, 3), (3, 2), (3, 1))

LAST_ROW: frozenset[Vertex] = frozenset({(3, 1), (3, 2), (3, 3)})
LAST_COL: frozenset[Vertex] = frozenset({(1, 3), (2, 3), (3, 3)})
BOUNDARY: frozenset[Vertex] = LAST_ROW | LAST_COL
INNER_SQUARE: frozenset[Vertex] = frozenset({(1, 1), (1, 2), (2, 1), (2, 2)})
COL_ONLY: frozenset[Vertex] = LAST_COL - LAST_ROW  # {(1,3), (2,3)}
ROW_ONLY: frozenset[Vertex] = LAST_ROW - LAST_COL  # {(3,1), (3,2)}


class GridError(ValueError):
    """Raised for structurally invalid grid inputs."""


def is_vertex(v: object) -> bool:
    return (
        isinstance(v, tuple)
        and len(v) == 2
        and all(isinstance(x, int) and 1 <= x <= GRID_SIZE for x in v)
    )


def adjacent(u: Vertex, v: Vertex) -> bool:
    return abs(u[0] - v[0]) + abs(u[1] - v[1]) == 1


def edge(u: Vertex, v: Vertex) -> Edge:
    """Canonical edge: lexicographically smaller endpoint first."""
    if not adjacent(u, v):
        raise GridError(f"{u} and {v} are not grid-adjacent")
    return (u, v) if u < v else (v, u)


def edges_of_walk(vertices: Iterable[Vertex]) -> list[Edge]:
    vs = list(vertices)
    return [edge(a, b) for a, b in zip(vs, vs[1:])]


@dataclass(frozen=True)
class GridGraph:
    """An induced subgraph of the corner grid, given by deleted vertices."""

    rows: int
    cols: int
    vertices: frozenset[Vertex]
    edges: frozenset[Edge]
    deleted: frozenset[Vertex]

    def has_edge(self, u: Vertex, v: Vertex) -> bool:
        return adjacent(u, v) and edge(u, v) in self.edges

    def neighbors(self, v: Vertex) -> tuple[Vertex, ...]:
        r, c = v
        out = []
        for w in ((r - 1, c), (r, c - 1), (r, c + 1), (r + 1, c)):
            if w in self.vertices and edge(v, w) in self.edges:
                out.append(w)
        return tuple(sorted(out))

    def sorted_vertices(self) -> tuple[Vertex, ...]:
        return tuple(sorted(self.vertices))

    def sorted_edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.edges))


@lru_cache(maxsize=None)
def build_corner_grid(deleted: frozenset[Vertex] = frozenset()) -> GridGraph:
    """The corner grid minus a set of deleted vertices and incident edges."""
    deleted = frozenset(deleted)
    for v in deleted:
        if not is_vertex(v):
            raise GridError(f"deleted vertex {v} outside the corner grid")
    vertices = frozenset(ALL_VERTICES) - deleted
    all_edges = set()
    for r, c in vertices:
        for w in ((r, c + 1), (r + 1, c)):
            if w in vertices:
                all_edges.add(edge((r, c), w))
    return GridGraph(
        rows=GRID_SIZE,
        cols=GRID_SIZE,
        vertices=vertices,
        edges=frozenset(all_edges),
        deleted=deleted,
    )


def full_grid() -> GridGraph:
    return build_corner_grid(frozenset())


def grid_without_corner() -> GridGraph:
    return build_corner_grid(frozenset({CORNER}))


@dataclass(frozen=True)
class BoundaryPartition:
    """Last row A, last column B, boundary L = A|B, inner square S = Q - L."""

    A: frozenset[Vertex]
    B: frozenset[Vertex]
    L: frozenset[Vertex]
    S: frozenset[Vertex]
    corner_c: Vertex


def boundary_partition(g: GridGraph) -> BoundaryPartition:
    if g.deleted:
        raise GridError("boundary partition is defined on the full corner grid only")
    return BoundaryPartition(
        A=LAST_ROW, B=LAST_COL, L=BOUNDARY, S=INNER_SQUARE, corner_c=CORNER
    )


def reflect_vertex(v: Vertex) -> Vertex:
    return (v[1], v[0])


def reflect_edge(e: Edge) -> Edge:
    u, v = (reflect_vertex(e[0]), reflect_vertex(e[1]))
    return (u, v) if u < v else (v, u)


def diagonal_reflect(x):
    """Transpose (i,j) -> (j,i), applied componentwise.

    Accepts a vertex, an edge, or any object exposing a ``reflected()``
    method (paths, terminal configurations, escape plans).  An involution;
    swaps the last row with the last column and fixes the inner square.
    """
    if hasattr(x, "reflected"):
        return x.reflected()
    if isinstance(x, tuple) and len(x) == 2:
        if isinstance(x[0], int):
            return reflect_vertex(x)
        return reflect_edge(x)
    raise TypeError(f"cannot reflect object of type {type(x)!r}")


def unique_l_path(u: Vertex, v: Vertex) -> tuple[Vertex, ...]:
    """The unique walk between two boundary vertices inside the boundary path.

    Returns the vertex sequence; zero-length (a single vertex) when u == v.
    """
    if u not in BOUNDARY or v not in BOUNDARY:
        raise GridError(f"unique_l_path requires boundary vertices, got {u}, {v}")
    i, j = L_ORDER.index(u), L_ORDER.index(v)
    if i <= j:
        return L_ORDER[i : j + 1]
    return tuple(reversed(L_ORDER[j : i + 1]))


# Edge-set helpers used by the constructive router.

def row_edges(i: int) -> frozenset[Edge]:
    return frozenset(edge((i, c), (i, c + 1)) for c in range(1, GRID_SIZE))


def col_edges(j: int) -> frozenset[Edge]:
    return frozenset(edge((r, j), (r + 1, j)) for r in range(1, GRID_SIZE))


L_EDGES: frozenset[Edge] = frozenset(edges_of_walk(L_ORDER))
S_EDGES: frozenset[Edge] = frozenset(
    {edge((1, 1), (1, 2)), edge((1, 2), (2, 2)), edge((2, 1), (2, 2)), edge((1, 1), (2, 1))}
)
# The four edges joining the inner square to the boundary.
BRIDGE_EDGES: frozenset[Edge] = frozenset(
    {edge((1, 2), (1, 3)), edge((2, 2), (2, 3)), edge((2, 2), (3, 2)), edge((2, 1), (3, 1))}
)

INNER_CYCLE_4: tuple[Vertex, ...] = ((2, 2), (2, 3), (3, 3), (3, 2))
# Six-cycle on Q minus the first row.
CYCLE_6_NO_ROW1: tuple[Vertex, ...] = ((2, 1), (2, 2), (2, 3), (3, 3), (3, 2), (3, 1))
# Six-cycle on Q minus the first column.
CYCLE_6_NO_COL1: tuple[Vertex, ...] = ((1, 2), (1, 3), (2, 3), (3, 3), (3, 2), (2, 2))
# Eight-cycle on Q minus the corner (3,3).
CYCLE_8_NO_CORNER: tuple[Vertex, ...] = (
    (1, 1), (1, 2), (1, 3), (2, 3), (2, 2), (3, 2), (3, 1), (2, 1),
)


def cycle_edges(cycle: tuple[Vertex, ...]) -> frozenset[Edge]:
    return frozenset(
        edge(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))
    )
