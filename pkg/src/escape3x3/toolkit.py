"""Construction primitives for the constructive router.

A RoutingContext tracks the free edges, the current position of every
unresolved terminal, and the path fragments each terminal has accumulated
(from shifts and matings).  The primitives:

* shifting a terminal along the boundary path, consuming its edges;
* mating two terminals through a clip (a boundary-anchored subgraph in
  which any two covered vertices can be routed edge-disjointly to the two
  anchors);
* completing a frame (a cycle plus two attachment paths to an anchor),
  which links two pairs via opposite cycle arcs;
* linking two pairs anywhere in a weakly 2-linked subgraph.

Every clip used anywhere is listed in the packaged catalog and is
machine-verified; nothing about a clip is trusted from its drawing.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from importlib import resources

from . import kernel
from .grid import (
    BOUNDARY,
    LAST_ROW,
    Edge,
    GridGraph,
    Vertex,
    cycle_edges,
    edge,
    edges_of_walk,
    full_grid,
    unique_l_path,
)
from .model import Path, Verdict, Violation, Code
from .terminals import TerminalConfig


class ToolkitError(RuntimeError):
    code = "TOOLKIT"


class NotOnBoundary(ToolkitError):
    code = "NOT_ON_L"


class ShiftBlocked(ToolkitError):
    code = "SHIFT_BLOCKED"


class ClipFailed(ToolkitError):
    code = "CLIP_FAILED"


class FrameConflict(ToolkitError):
    code = "FRAME_CONFLICT"


TermId = tuple
# ("p", pair_index, 0 | 1) for pair members, ("s", singleton_index) for
# singletons; ids sort deterministically.


def term_ids(cfg: TerminalConfig) -> dict[TermId, Vertex]:
    out: dict[TermId, Vertex] = {}
    for i, (a, b) in enumerate(cfg.pairs):
        out[("p", i, 0)] = a
        out[("p", i, 1)] = b
    for j, s in enumerate(cfg.singletons):
        out[("s", j)] = s
    return out


def partner(tid: TermId) -> TermId | None:
    if tid[0] == "p":
        return ("p", tid[1], 1 - tid[2])
    return None


@dataclass
class RoutingContext:
    """Mutable bookkeeping for one routing job; single-owner."""

    grid: GridGraph
    cfg: TerminalConfig
    free: set[Edge]
    positions: dict[TermId, Vertex]
    origins: dict[TermId, Vertex]
    fragments: dict[TermId, list[Path]]
    reserved_exits: set[Vertex] = field(default_factory=set)
    linked: dict[int, Path] = field(default_factory=dict)
    escaped: dict[TermId, tuple[Vertex, Path]] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @staticmethod
    def fresh(cfg: TerminalConfig, grid: GridGraph | None = None) -> "RoutingContext":
        grid = grid or full_grid()
        ids = term_ids(cfg)
        return RoutingContext(
            grid=grid,
            cfg=cfg,
            free=set(grid.edges),
            positions=dict(ids),
            origins=dict(ids),
            fragments={tid: [] for tid in ids},
        )

    # -- queries ----------------------------------------------------------

    def terminals_at(self, v: Vertex) -> list[TermId]:
        return sorted(tid for tid, pos in self.positions.items() if pos == v)

    def is_free_vertex(self, v: Vertex) -> bool:
        """A boundary vertex hosting no unresolved terminal, not reserved."""
        return (
            v in BOUNDARY
            and v not in self.reserved_exits
            and not any(pos == v for pos in self.positions.values())
        )

    def free_boundary_vertices(self, order) -> list[Vertex]:
        return [v for v in order if self.is_free_vertex(v)]

    def assembled(self, tid: TermId) -> Path:
        path = Path((self.origins[tid],))
        for frag in self.fragments[tid]:
            path = path + frag
        return path

    # -- mutations --------------------------------------------------------

    def consume(self, edges) -> None:
        for e in edges:
            if e not in self.free:
                raise ToolkitError(f"edge {e} is not free")
            self.free.discard(e)

    def move(self, tid: TermId, path: Path) -> None:
        """Advance a terminal along a path, consuming its edges."""
        if self.positions.get(tid) != path.start:
            raise ToolkitError(
                f"{tid} is at {self.positions.get(tid)}, path starts at {path.start}"
            )
        if path.is_zero_length():
            return
        self.consume(path.edges())
        self.fragments[tid].append(path)
        self.positions[tid] = path.end
        self._self_check()

    def shift(self, u: Vertex, v: Vertex) -> None:
        """Shift the terminal at u along the boundary path to v."""
        if u not in BOUNDARY or v not in BOUNDARY:
            raise NotOnBoundary(f"shift endpoints must lie on the boundary: {u}, {v}")
        tids = self.terminals_at(u)
        if not tids:
            raise ToolkitError(f"no terminal at {u} to shift")
        walk = unique_l_path(u, v)
        for e in edges_of_walk(walk):
            if e not in self.free:
                raise ShiftBlocked(f"boundary edge {e} already consumed")
        self.move(tids[0], Path(walk))

    def finish_escape(self, tid: TermId, exit_vertex: Vertex | None = None) -> None:
        """Resolve a terminal as escaping at its current position."""
        pos = self.positions[tid]
        if exit_vertex is not None and exit_vertex != pos:
            raise ToolkitError(f"{tid} is at {pos}, cannot exit at {exit_vertex}")
        full = self.assembled(tid)
        self.escaped[tid] = (pos, full)
        self.reserved_exits.add(pos)
        del self.positions[tid]

    def escape_via(self, tid: TermId, path: Path) -> None:
        self.move(tid, path)
        self.finish_escape(tid)

    def finish_link(self, pair_index: int, core: Path) -> None:
        """Link a pair with a core path joining the two current positions."""
        a, b = ("p", pair_index, 0), ("p", pair_index, 1)
        if {core.start, core.end} != {self.positions[a], self.positions[b]} and not (
            core.is_zero_length() and self.positions[a] == self.positions[b] == core.start
        ):
            raise ToolkitError(
                f"core {core.start}->{core.end} does not join pair {pair_index} at "
                f"{self.positions[a]}, {self.positions[b]}"
            )
        if core.start != self.positions[a]:
            core = core.reversed()
        if not core.is_zero_length():
            self.consume(core.edges())
        full = self.assembled(a) + core + self.assembled(b).reversed()
        self.linked[pair_index] = full
        del self.positions[a]
        del self.positions[b]
        self._self_check()

    def plan(self):
        from .model import EscapePlan

        escapes = [
            (self.origins[tid], exit_v, path)
            for tid, (exit_v, path) in self.escaped.items()
        ]
        return EscapePlan.build(dict(self.linked), escapes)

    def _self_check(self) -> None:
        if not __debug__:
            return
        used: set[Edge] = set()
        for tid, frags in self.fragments.items():
            at = self.origins[tid]
            for frag in frags:
                assert frag.start == at, f"fragment chain broken for {tid}"
                at = frag.end
                for e in frag.edges():
                    assert e not in used, f"edge {e} in two fragments"
                    used.add(e)
            if tid in self.positions:
                assert at == self.positions[tid]
        for path in self.linked.values():
            for e in path.edges():
                assert e not in self.free, "linked path edge still free"
        assert not (used & self.free), "fragment edge still marked free"


# -- weak 2-linkage -------------------------------------------------------


def link_pairs_in_subgraph(
    g: GridGraph, u1: Vertex, v1: Vertex, u2: Vertex, v2: Vertex
) -> tuple[Path, Path]:
    """Two edge-disjoint trails u1->v1 and u2->v2 inside g.

    Intended for the two weakly 2-linked subgraphs (the full corner grid and
    the grid minus its far corner), where existence is guaranteed and
    exhaustively verified; raises if no system exists.
    """
    trails, _, _ = kernel.solve_trails(g, g.edges, [(u1, v1), (u2, v2)])
    if trails is None:
        raise ToolkitError(f"no edge-disjoint linkage for {u1}-{v1}, {u2}-{v2} in {g}")
    return trails[0], trails[1]


# -- clips ----------------------------------------------------------------


@dataclass(frozen=True)
class ClipSpec:
    """A named boundary-anchored subgraph with the two-anchor mating property."""

    name: str
    u: Vertex
    v: Vertex
    kind: str  # "AA" or "AB"
    edges: frozenset[Edge]

    def covered(self) -> tuple[Vertex, ...]:
        return tuple(sorted({w for e in self.edges for w in e}))

    def expected_kind(self) -> str:
        return "AA" if self.u in LAST_ROW and self.v in LAST_ROW else "AB"


def verify_clip(g: GridGraph, clip: ClipSpec) -> Verdict:
    """Check the clip property by brute force.

    For every unordered pair of distinct covered vertices there must exist
    two edge-disjoint trails inside the clip, one to each anchor (either
    assignment of the pair to the anchors may be used).
    """
    violations = []
    if not clip.edges <= g.edges:
        violations.append(
            Violation(Code.NOT_A_PATH, f"clip {clip.name} uses edges outside the graph")
        )
        return Verdict.from_violations(violations)
    if clip.u not in BOUNDARY or clip.v not in BOUNDARY:
        violations.append(
            Violation(Code.BAD_ENDPOINT, f"clip {clip.name} anchors off the boundary")
        )
    if clip.kind != clip.expected_kind():
        violations.append(
            Violation(Code.BAD_ENDPOINT, f"clip {clip.name} kind mismatch")
        )
    for x, y in itertools.combinations(clip.covered(), 2):
        if _mating_paths(g, clip, x, y) is None:
            violations.append(
                Violation(
                    Code.NOT_A_PATH,
                    f"clip {clip.name} cannot mate {x}, {y} to {clip.u}, {clip.v}",
                    (x, y),
                )
            )
    return Verdict.from_violations(violations)


def _mating_paths(
    g: GridGraph, clip: ClipSpec, x: Vertex, y: Vertex, free=None
) -> tuple[Path, Path] | None:
    """Edge-disjoint trails from {x, y} onto {u, v} within the clip."""
    edges = clip.edges if free is None else (clip.edges & free)
    for a, b in ((x, y), (y, x)):
        trails, _, _ = kernel.solve_trails(g, edges, [(a, clip.u), (b, clip.v)])
        if trails is not None:
            first, second = trails
            return (first, second) if a == x else (second, first)
    return None


def mate_through_clip(ctx: RoutingContext, clip: ClipSpec, x: Vertex, y: Vertex) -> None:
    """Mate the terminals currently at x and y onto the clip anchors."""
    if not clip.edges <= ctx.free:
        raise ClipFailed(f"clip {clip.name} edges are not all free")
    paths = _mating_paths(ctx.grid, clip, x, y)
    if paths is None:
        raise ClipFailed(f"clip {clip.name} cannot mate {x}, {y}")
    px, py = paths
    tx = ctx.terminals_at(x)
    ty = [t for t in ctx.terminals_at(y) if not tx or t != tx[0]]
    if not tx or not ty:
        raise ClipFailed(f"no unresolved terminals at {x} and {y}")
    ctx.move(tx[0], px)
    ctx.move(ty[0], py)
    ctx.reserved_exits.update({clip.u, clip.v})
    ctx.notes.append(f"clip:{clip.name}")


# -- frames ---------------------------------------------------------------


@dataclass(frozen=True)
class FrameSpec:
    """A cycle with an anchor and one attachment path per pair."""

    cycle: tuple[Vertex, ...]  # closed walk, first vertex not repeated
    anchor: Vertex
    attach: tuple[Path, Path]  # each ends at the anchor

    def __post_init__(self):
        if self.anchor not in self.cycle:
            raise FrameConflict("anchor must lie on the cycle")
        for p in self.attach:
            if p.end != self.anchor:
                raise FrameConflict("attachment paths must end at the anchor")
            if set(p.edges()) & cycle_edges(self.cycle):
                raise FrameConflict("attachment paths may not use cycle edges")
        if set(self.attach[0].edges()) & set(self.attach[1].edges()):
            raise FrameConflict("attachment paths must be edge-disjoint")


def _arc(cycle: tuple[Vertex, ...], frm: Vertex, to: Vertex, direction: int) -> Path:
    n = len(cycle)
    i = cycle.index(frm)
    out = [frm]
    while out[-1] != to:
        i = (i + direction) % n
        out.append(cycle[i])
        if len(out) > n + 1:
            raise FrameConflict("arc walk failed to close")
    return Path(tuple(out))


def complete_frame(
    ctx: RoutingContext, frame: FrameSpec, mate1: Path, mate2: Path
) -> tuple[Path, Path]:
    """Assemble the two linkage trails a frame provides.

    mate_i carries pair i's other member onto some cycle vertex.  The trail
    for pair i is attach_i + (cycle arc from the anchor to mate_i's landing)
    + reversed mate_i; the two arcs are chosen with opposite orientations so
    they share no edge.  All edges must be free; consumption happens when
    the caller records the two trails as linkages.
    """
    landings = (mate1.end, mate2.end)
    for p, what in ((mate1, "mate1"), (mate2, "mate2")):
        if p.end not in frame.cycle:
            raise FrameConflict(f"{what} does not land on the cycle")
    for d1, d2 in ((1, -1), (-1, 1), (1, 1), (-1, -1)):
        arc1 = _arc(frame.cycle, frame.anchor, landings[0], d1)
        arc2 = _arc(frame.cycle, frame.anchor, landings[1], d2)
        pieces = [frame.attach[0], frame.attach[1], arc1, arc2, mate1, mate2]
        all_edges: list[Edge] = []
        for piece in pieces:
            all_edges.extend(piece.edges())
        if len(set(all_edges)) != len(all_edges):
            continue
        if not set(all_edges) <= ctx.free:
            continue
        trail1 = frame.attach[0] + arc1 + mate1.reversed()
        trail2 = frame.attach[1] + arc2 + mate2.reversed()
        return trail1, trail2
    raise FrameConflict("no arc orientation avoids edge reuse")


# -- clip catalog ---------------------------------------------------------


def _parse_clip(rec: dict) -> ClipSpec:
    edges = frozenset(edge(tuple(a), tuple(b)) for a, b in rec["edges"])
    return ClipSpec(
        name=rec["name"],
        u=tuple(rec["u"]),
        v=tuple(rec["v"]),
        kind=rec["kind"],
        edges=edges,
    )


def load_clip_catalog() -> dict[str, ClipSpec]:
    text = resources.files("escape3x3").joinpath("data/clips.json").read_text("utf-8")
    records = json.loads(text)
    catalog = {}
    for rec in records:
        clip = _parse_clip(rec)
        if clip.name in catalog:
            raise ValueError(f"duplicate clip name {clip.name}")
        catalog[clip.name] = clip
    return catalog


_catalog_cache: dict[str, ClipSpec] | None = None


def clip_catalog() -> dict[str, ClipSpec]:
    global _catalog_cache
    if _catalog_cache is None:
        _catalog_cache = load_clip_catalog()
    return _catalog_cache
