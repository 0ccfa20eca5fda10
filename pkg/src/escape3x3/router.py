"""Constructive routing for the three terminal families.

Each router follows a fixed case tree keyed on where the terminals sit
(inner square vs boundary, pair composition), assembling plans from the
toolkit primitives: boundary shifts, clip matings, frames, and linkages
restricted to stated subregions.  Every produced plan is validated; in
strict mode a case whose construction fails raises CaseGap, otherwise the
exhaustive oracle is substituted and the fallback is recorded on the trace.

Where a case leaves a choice open (which free vertex, which of several
catalogued clips), ties are broken lexicographically so that routing is
bit-identical across runs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import kernel
from .grid import (
    BOUNDARY,
    COL_ONLY,
    CORNER,
    CYCLE_6_NO_COL1,
    CYCLE_6_NO_ROW1,
    CYCLE_8_NO_CORNER,
    INNER_CYCLE_4,
    INNER_SQUARE,
    LAST_COL,
    LAST_ROW,
    L_EDGES,
    L_ORDER,
    ROW_ONLY,
    S_EDGES,
    Vertex,
    col_edges,
    cycle_edges,
    edge,
    full_grid,
    row_edges,
    unique_l_path,
)
from .model import (
    EscapePlan,
    Path,
    contract_for,
    reflected_plan,
    validate_plan,
)
from .oracle import SearchBudget, oracle_solve
from .terminals import LemmaId, TerminalConfig, family_of
from .toolkit import (
    FrameSpec,
    RoutingContext,
    ToolkitError,
    clip_catalog,
    complete_frame,
    mate_through_clip,
    partner,
)


class RouterError(RuntimeError):
    pass


class CaseGap(RouterError):
    """A documented case matched but its construction could not complete."""

    code = "CASE_GAP"


class UnsupportedFamily(ValueError):
    code = "UNSUPPORTED_FAMILY"


@dataclass(frozen=True)
class CaseTrace:
    lemma: LemmaId
    case_labels: tuple[str, ...]
    used_fallback: bool = False
    symmetry_applied: bool = False


# Registry of every case label a router can emit, per family; the campaign's
# dead-branch alarm checks each one is hit at least once.
CASE_LABELS: dict[LemmaId, frozenset[str]] = {
    LemmaId.HEAVY78: frozenset(
        {
            "L2/a/pair-in-S",
            "L2/a/two-members",
            "L2/a/member-and-singleton",
            "L2/b/pair-plus-member",
            "L2/b/pair-plus-singleton",
            "L2/b/three-members",
            "L2/b/members-and-singleton",
            "L2/c/two-pairs",
            "L2/c/pair-plus-two",
            "L2/c/no-pair-center-member",
            "L2/c/no-pair-center-singleton",
            "L2/c/no-pair-center-singleton-direct",
        }
    ),
    LemmaId.HEAVY6: frozenset(
        {
            "L3/a/pair-on-L",
            "L3/b/S2",
            "L3/b/other-pair-on-L",
            "L3/b/S3",
            "L3/b/S4-col2",
            "L3/b/S4-col1",
            "L3/b/S4-col0",
            "L3/c/S2-w-row",
            "L3/c/S2-w-col",
            "L3/c/S3-t2-in-B",
            "L3/c/S3-t2-in-row",
            "L3/d/S2-all-B-free",
            "L3/d/S2-corner-pair",
            "L3/d/S2-colpair",
            "L3/d/S3",
            "L3/end/S2-two-singles",
            "L3/end/S2-two-members",
            "L3/end/S2-w-row",
            "L3/end/S2-t1-row",
            "L3/end/S2-B",
            "L3/end/S3-col0",
            "L3/end/S3-t-col",
            "L3/end/S3-corner-free",
            "L3/end/S3-corner-taken",
            "L3/end/S3-col2",
            "L3/end/S4-rows",
            "L3/end/S4-cols",
            "L3/end/S4-corner",
            "L3/end/S4-mixed",
        }
    ),
    LemmaId.HEAVY5: frozenset(
        {
            "L4/a/S2-shift-pair",
            "L4/a/S2",
            "L4/a/S3",
            "L4/a/S4-corner-free",
            "L4/a/S4-corner-in-pair",
            "L4/b/pair-on-L",
            "L4/b/t1-in-col",
            "L4/b/t1-in-row",
            "L4/c",
            "L4/d/S2",
            "L4/d/S3",
            "L4/e/S3-pair-on-L",
            "L4/e/S2-aa",
            "L4/e/S2-ab",
            "L4/e/S2-member",
            "L4/e/S3-t1-in-B",
            "L4/e/S3-t1-in-row",
            "L4/e/S4-extension",
        }
    ),
}


# -- small helpers ----------------------------------------------------------


def _terminals_in(cfg: TerminalConfig, region: frozenset[Vertex]) -> list[Vertex]:
    return sorted(t for t in cfg.terminals if t in region)


def _s_count(cfg: TerminalConfig) -> int:
    return len(_terminals_in(cfg, INNER_SQUARE))


def _pairs_within(cfg: TerminalConfig, region: frozenset[Vertex]) -> list[int]:
    return [i for i, (a, b) in enumerate(cfg.pairs) if a in region and b in region]


def _walk(*vertices: Vertex) -> Path:
    return Path(tuple(vertices))


def _row_walk(v: Vertex, col: int) -> tuple[Vertex, ...]:
    r, c = v
    step = 1 if col >= c else -1
    return tuple((r, cc) for cc in range(c, col + step, step))


def _col_walk(v: Vertex, row: int) -> tuple[Vertex, ...]:
    r, c = v
    step = 1 if row >= r else -1
    return tuple((rr, c) for rr in range(r, row + step, step))


def _first_trail(ctx: RoutingContext, start: Vertex, end: Vertex, allowed=None) -> Path | None:
    region = ctx.free if allowed is None else (set(allowed) & ctx.free)
    trails, _, _ = kernel.solve_trails(ctx.grid, region, [(start, end)])
    return trails[0] if trails else None


def _joint_trails(ctx: RoutingContext, endpoint_pairs, allowed=None) -> list[Path] | None:
    region = ctx.free if allowed is None else (set(allowed) & ctx.free)
    trails, _, _ = kernel.solve_trails(ctx.grid, region, endpoint_pairs)
    return trails


def _col_exits_used(ctx: RoutingContext) -> int:
    return sum(1 for x, _ in ctx.escaped.values() if x in COL_ONLY)


def _finish(
    ctx: RoutingContext,
    escape_tids=(),
    candidates=None,
    allowed=None,
    max_col: int | None = None,
    label: str = "",
) -> None:
    """Escape the given terminals to free boundary vertices, rest in place.

    All pairs must already be linked.  Exit assignments are tried in
    candidate order (lexicographic by default), respecting the remaining
    budget of restricted-column exits; the trails are packed jointly.
    """
    escape_tids = sorted(escape_tids)
    rest = sorted(set(ctx.positions) - set(escape_tids))
    for tid in rest:
        if ctx.positions[tid] not in BOUNDARY:
            raise CaseGap(f"{label}: terminal {tid} stranded at {ctx.positions[tid]}")
    if candidates is None:
        candidates = [v for v in sorted(BOUNDARY) if ctx.is_free_vertex(v)]
    else:
        candidates = [v for v in candidates if ctx.is_free_vertex(v)]
    budget = None
    if max_col is not None:
        used = _col_exits_used(ctx)
        used += sum(1 for tid in rest if ctx.positions[tid] in COL_ONLY)
        budget = max_col - used
    if not escape_tids:
        for tid in rest:
            ctx.finish_escape(tid)
        return
    positions = [ctx.positions[t] for t in escape_tids]
    for assignment in itertools.permutations(candidates, len(escape_tids)):
        if budget is not None:
            if sum(1 for x in assignment if x in COL_ONLY) > budget:
                continue
        trails = _joint_trails(ctx, list(zip(positions, assignment)), allowed)
        if trails is None:
            continue
        for tid, trail in zip(escape_tids, trails):
            ctx.move(tid, trail)
            ctx.finish_escape(tid)
        for tid in rest:
            ctx.finish_escape(tid)
        return
    raise CaseGap(f"{label}: no exit assignment for {escape_tids}")


def _mate_to_anchors(
    ctx: RoutingContext,
    tid_x,
    tid_y,
    anchors: tuple[Vertex, Vertex],
    label: str,
    forbid=frozenset(),
) -> str:
    """Mate two terminals onto a pair of boundary anchors.

    Prefers catalogued clips with these anchors whose edges are free, do not
    touch the forbidden edges, and cover both current positions; otherwise
    routes the two matings directly in the free region (the in-text clips
    are exactly such anchored matings).  Returns the clip name used.
    """
    x, y = ctx.positions[tid_x], ctx.positions[tid_y]
    want = set(anchors)
    for name in sorted(clip_catalog()):
        clip = clip_catalog()[name]
        if {clip.u, clip.v} != want:
            continue
        if not clip.edges <= ctx.free or (clip.edges & set(forbid)):
            continue
        covered = set(clip.covered())
        if x not in covered or y not in covered:
            continue
        try:
            mate_through_clip(ctx, clip, x, y)
            return name
        except ToolkitError:
            continue
    u, v = anchors
    allowed = ctx.free - set(forbid)
    for a, b in (((x, u), (y, v)), ((x, v), (y, u))):
        trails = _joint_trails(ctx, [a, b], allowed)
        if trails is not None:
            ctx.move(tid_x, trails[0])
            ctx.move(tid_y, trails[1])
            ctx.reserved_exits.update(anchors)
            ctx.notes.append("clip:direct")
            return "direct"
    raise CaseGap(f"{label}: cannot mate {x}, {y} onto {anchors}")


def _cascade_shift_through_corner(ctx: RoutingContext, label: str) -> None:
    """Move the terminal off (2,3) along the boundary through the corner to
    the first free vertex, conveyor-style: every terminal on the walk up to
    that vertex shifts one stop toward it."""
    walk = ((2, 3), (3, 3), (3, 2), (3, 1))
    free_at = None
    for idx in range(1, len(walk)):
        if ctx.is_free_vertex(walk[idx]):
            free_at = idx
            break
    if free_at is None:
        raise CaseGap(f"{label}: no free vertex to shift toward")
    for i in range(free_at - 1, -1, -1):
        if ctx.terminals_at(walk[i]):
            ctx.shift(walk[i], walk[i + 1])


def _both_col_stub_occupied(ctx: RoutingContext) -> bool:
    return all(ctx.terminals_at(v) for v in sorted(COL_ONLY))


def _both_col_stub_singles(ctx: RoutingContext) -> bool:
    return all(
        any(t[0] == "s" for t in ctx.terminals_at(v)) for v in sorted(COL_ONLY)
    )


def _link_and_escape(
    ctx: RoutingContext,
    pair_idxs,
    escape_tids,
    candidates=None,
    allowed=None,
    max_col: int | None = None,
    label: str = "",
) -> None:
    """Jointly link pairs and escape terminals to free boundary vertices.

    The pair trails and escape trails are packed in one search so a linkage
    never strands an escaper; everything else exits in place afterwards.
    """
    pair_idxs = list(pair_idxs)
    eps = [
        (ctx.positions[("p", i, 0)], ctx.positions[("p", i, 1)]) for i in pair_idxs
    ]
    escape_tids = sorted(escape_tids)
    positions = [ctx.positions[t] for t in escape_tids]
    if candidates is None:
        candidates = [v for v in sorted(BOUNDARY) if ctx.is_free_vertex(v)]
    else:
        candidates = [v for v in candidates if ctx.is_free_vertex(v)]
    rest = (
        set(ctx.positions)
        - set(escape_tids)
        - {("p", i, k) for i in pair_idxs for k in (0, 1)}
    )
    budget = None
    if max_col is not None:
        used = _col_exits_used(ctx)
        used += sum(1 for t in rest if ctx.positions[t] in COL_ONLY)
        budget = max_col - used
    for assignment in itertools.permutations(candidates, len(escape_tids)):
        if budget is not None:
            if sum(1 for x in assignment if x in COL_ONLY) > budget:
                continue
        trails = _joint_trails(ctx, eps + list(zip(positions, assignment)), allowed)
        if trails is None:
            continue
        for i, tr in zip(pair_idxs, trails):
            ctx.finish_link(i, tr)
        for tid, tr in zip(escape_tids, trails[len(pair_idxs) :]):
            ctx.move(tid, tr)
            ctx.finish_escape(tid)
        for tid in sorted(rest):
            ctx.finish_escape(tid)
        return
    raise CaseGap(f"{label}: joint link and escape failed")


def _link_with_walk(ctx: RoutingContext, pair_idx: int, vertices) -> None:
    ctx.finish_link(pair_idx, Path(tuple(vertices)))


def _link_search(ctx: RoutingContext, pair_idx: int, allowed=None, label: str = "") -> None:
    a = ctx.positions[("p", pair_idx, 0)]
    b = ctx.positions[("p", pair_idx, 1)]
    trail = _first_trail(ctx, a, b, allowed)
    if trail is None:
        raise CaseGap(f"{label}: no linkage for pair {pair_idx}")
    ctx.finish_link(pair_idx, trail)


def _link_many(ctx: RoutingContext, pair_idxs, allowed=None, label: str = "") -> None:
    """Link several pairs jointly (edge-disjoint) inside one region."""
    eps = []
    for i in pair_idxs:
        eps.append((ctx.positions[("p", i, 0)], ctx.positions[("p", i, 1)]))
    trails = _joint_trails(ctx, eps, allowed)
    if trails is None:
        raise CaseGap(f"{label}: no joint linkage for pairs {pair_idxs}")
    for i, trail in zip(pair_idxs, trails):
        ctx.finish_link(i, trail)


def _tid_at(ctx: RoutingContext, v: Vertex):
    tids = ctx.terminals_at(v)
    if not tids:
        raise CaseGap(f"no terminal at {v}")
    return tids[0]


def _singleton_tids(ctx: RoutingContext):
    return sorted(t for t in ctx.positions if t[0] == "s")


# Edges of the grid minus its last column (the region escape matings toward
# the last row are confined to in several cases).
QMB_EDGES = frozenset(
    e for e in full_grid().edges if e[0] not in LAST_COL and e[1] not in LAST_COL
)


# ---------------------------------------------------------------------------
# Family with five terminals: one pair, three singletons.
# ---------------------------------------------------------------------------


def route_heavy5(cfg: TerminalConfig, strict: bool = False) -> tuple[EscapePlan, CaseTrace]:
    if family_of(cfg) is not LemmaId.HEAVY5:
        raise UnsupportedFamily("expected 1 pair + 3 singletons")
    return _route_with_fallback(cfg, LemmaId.HEAVY5, _heavy5_case, strict)


def _heavy5_case(cfg: TerminalConfig):
    pair = set(cfg.pairs[0])
    sc = _s_count(cfg)
    if pair <= INNER_SQUARE:
        return _h5_case_a(cfg)
    if sc <= 1:
        return _h5_case_b(cfg)
    if pair <= LAST_ROW:
        return _h5_case_c(cfg)
    if pair <= LAST_COL:
        return _h5_case_d(cfg)
    return _h5_case_e(cfg)


def _h5_case_a(cfg: TerminalConfig):
    ctx = RoutingContext.fresh(cfg)
    sc = _s_count(cfg)
    singles = _singleton_tids(ctx)
    if sc == 2:
        col_singles = [t for t in singles if ctx.positions[t] in COL_ONLY]
        if len(col_singles) == 2:
            label = "L4/a/S2-shift-pair"
            z_tid = _tid_at(ctx, (2, 3))
            w = next(v for v in ((3, 1), (3, 2), (3, 3)) if ctx.is_free_vertex(v))
            a, b = cfg.pairs[0]
            trails = _joint_trails(ctx, [(a, b), ((2, 3), w)])
            if trails is None:
                raise CaseGap(f"{label}: 2-linkage failed")
            ctx.finish_link(0, trails[0])
            ctx.move(z_tid, trails[1])
            _finish(ctx, label=label, max_col=1)
            return ctx, label
        label = "L4/a/S2"
        _link_search(ctx, 0, allowed=S_EDGES, label=label)
        _finish(ctx, label=label, max_col=1)
        return ctx, label
    if sc == 3:
        label = "L4/a/S3"
        inner = [t for t in singles if ctx.positions[t] in INNER_SQUARE]
        s2 = inner[0]
        if _both_col_stub_occupied(ctx):
            ctx.shift((2, 3), (3, 3))
        w = next(
            (v for v in ((3, 1), (3, 2), (3, 3)) if ctx.is_free_vertex(v)), None
        )
        allowed = ctx.free
        if w is None:
            used = _col_exits_used(ctx) + sum(
                1
                for t in singles
                if t != s2 and ctx.positions[t] in COL_ONLY
            )
            w = next(
                (v for v in ((1, 3), (2, 3)) if ctx.is_free_vertex(v) and used < 1),
                None,
            )
        if w is None:
            raise CaseGap(f"{label}: no exit for the inner singleton")
        if w != (3, 3):
            allowed = {e for e in ctx.free if CORNER not in e}
        a, b = cfg.pairs[0]
        trails = _joint_trails(ctx, [(a, b), (ctx.positions[s2], w)], allowed)
        if trails is None:
            trails = _joint_trails(ctx, [(a, b), (ctx.positions[s2], w)])
        if trails is None:
            raise CaseGap(f"{label}: 2-linkage failed")
        ctx.finish_link(0, trails[0])
        ctx.move(s2, trails[1])
        _finish(ctx, label=label, max_col=1)
        return ctx, label
    # four terminals inside the square
    corner_free = (1, 1) not in set(cfg.pairs[0])
    label = "L4/a/S4-corner-free" if corner_free else "L4/a/S4-corner-in-pair"
    if corner_free:
        reduced = {edge((1, 2), (2, 2)), edge((2, 1), (2, 2))}
        _link_search(ctx, 0, allowed=reduced, label=label)
        escapers = [t for t in _singleton_tids(ctx) if ctx.positions[t] in INNER_SQUARE]
        _finish(
            ctx,
            escapers,
            candidates=[(3, 1), (3, 2), (1, 3)],
            allowed=cycle_edges(CYCLE_8_NO_CORNER),
            max_col=1,
            label=label,
        )
        return ctx, label
    _link_search(ctx, 0, allowed=S_EDGES, label=label)
    escapers = [t for t in _singleton_tids(ctx) if ctx.positions[t] in INNER_SQUARE]
    _finish(
        ctx,
        escapers,
        candidates=[(3, 1), (3, 2), (1, 3)],
        allowed=ctx.free - S_EDGES,
        max_col=1,
        label=label,
    )
    return ctx, label


def _h5_case_b(cfg: TerminalConfig):
    ctx = RoutingContext.fresh(cfg)
    pair = set(cfg.pairs[0])
    if pair <= BOUNDARY:
        label = "L4/b/pair-on-L"
        a, b = cfg.pairs[0]
        _link_with_walk(ctx, 0, unique_l_path(a, b))
        if _both_col_stub_occupied(ctx):
            _cascade_shift_through_corner(ctx, label)
        inner = [t for t in ctx.positions if ctx.positions[t] in INNER_SQUARE]
        _finish(ctx, inner, candidates=[a, b] + sorted(BOUNDARY), max_col=1, label=label)
        return ctx, label
    s1 = next(v for v in pair if v in INNER_SQUARE)
    t1 = next(v for v in pair if v in BOUNDARY)
    if t1 in COL_ONLY:
        label = "L4/b/t1-in-col"
        walk = _row_walk(s1, 3)
        walk = walk + tuple(unique_l_path((s1[0], 3), t1)[1:])
        _link_with_walk(ctx, 0, walk)
        _finish(ctx, label=label, max_col=1)
        return ctx, label
    label = "L4/b/t1-in-row"
    if _both_col_stub_occupied(ctx):
        _cascade_shift_through_corner(ctx, label)
    # Link to the pair member's current position (it may have shifted).
    member = [tid for tid in (("p", 0, 0), ("p", 0, 1)) if ctx.origins[tid] == t1][0]
    other = ("p", 0, 1 - member[2])
    core = _first_trail(ctx, ctx.positions[other], ctx.positions[member])
    if core is None:
        raise CaseGap(f"{label}: no linkage path")
    ctx.finish_link(0, core)
    _finish(ctx, label=label, max_col=1)
    return ctx, label


def _h5_case_c(cfg: TerminalConfig):
    ctx = RoutingContext.fresh(cfg)
    label = "L4/c"
    a, b = cfg.pairs[0]
    _link_with_walk(ctx, 0, unique_l_path(a, b))
    inner = [t for t in ctx.positions if ctx.positions[t] in INNER_SQUARE]
    _finish(ctx, inner, candidates=[a, b, (1, 3)], max_col=1, label=label)
    return ctx, label


def _h5_case_d(cfg: TerminalConfig):
    ctx = RoutingContext.fresh(cfg)
    a, b = cfg.pairs[0]
    sc = _s_count(cfg)
    _link_with_walk(ctx, 0, unique_l_path(a, b))
    if sc == 2:
        label = "L4/d/S2"
        row_single = [t for t in ctx.positions if ctx.positions[t] in ROW_ONLY]
        if row_single:
            ctx.shift(ctx.positions[row_single[0]], (3, 3))
        inner = [t for t in ctx.positions if ctx.positions[t] in INNER_SQUARE]
        _mate_to_anchors(ctx, inner[0], inner[1], ((3, 1), (3, 2)), label)
        _finish(ctx, label=label, max_col=1)
        return ctx, label
    label = "L4/d/S3"
    inner = [t for t in ctx.positions if ctx.positions[t] in INNER_SQUARE]
    _finish(ctx, inner, candidates=[(3, 1), (3, 2), (1, 3)], max_col=1, label=label)
    return ctx, label


def _h5_case_e(cfg: TerminalConfig):
    ctx = RoutingContext.fresh(cfg)
    pair = set(cfg.pairs[0])
    sc = _s_count(cfg)
    if pair <= BOUNDARY:
        a_end = next(v for v in pair if v in ROW_ONLY)
        b_end = next(v for v in pair if v in COL_ONLY)
        if sc == 3:
            label = "L4/e/S3-pair-on-L"
            _link_with_walk(ctx, 0, unique_l_path(a_end, b_end))
            inner = [t for t in ctx.positions if ctx.positions[t] in INNER_SQUARE]
            _finish(
                ctx,
                inner,
                candidates=[(3, 1), (3, 2), (1, 3), (3, 3), (2, 3)],
                max_col=1,
                label=label,
            )
            return ctx, label
        # two inner singletons, one on the boundary
        l_single = [t for t in ctx.positions if t[0] == "s" and ctx.positions[t] in BOUNDARY]
        single_pos = ctx.positions[l_single[0]]
        _link_with_walk(ctx, 0, unique_l_path(a_end, b_end))
        inner = [t for t in ctx.positions if ctx.positions[t] in INNER_SQUARE]
        if single_pos not in ROW_ONLY:
            label = "L4/e/S2-aa"
            _mate_to_anchors(ctx, inner[0], inner[1], ((3, 1), (3, 2)), label)
        else:
            label = "L4/e/S2-ab"
            _mate_to_anchors(ctx, inner[0], inner[1], (a_end, b_end), label)
        _finish(ctx, label=label, max_col=1)
        return ctx, label
    s1 = next(v for v in pair if v in INNER_SQUARE)
    t1 = next(v for v in pair if v in BOUNDARY)
    if sc == 2:
        label = "L4/e/S2-member"
        s2 = [t for t in _singleton_tids(ctx) if ctx.positions[t] in INNER_SQUARE][0]
        if _both_col_stub_singles(ctx):
            _cascade_shift_through_corner(ctx, label)
        used_col = sum(
            1
            for t in _singleton_tids(ctx)
            if t != s2 and ctx.positions[t] in COL_ONLY
        )
        pa = ctx.positions[("p", 0, 0)]
        pb = ctx.positions[("p", 0, 1)]
        cands = [v for v in ((3, 1), (3, 2), (3, 3)) if ctx.is_free_vertex(v)]
        cands.append(t1)
        if used_col == 0:
            cands += [v for v in ((1, 3), (2, 3)) if ctx.is_free_vertex(v)]
        for w in cands:
            trails = _joint_trails(ctx, [(pa, pb), (ctx.positions[s2], w)])
            if trails is not None:
                ctx.finish_link(0, trails[0])
                ctx.move(s2, trails[1])
                _finish(ctx, label=label, max_col=1)
                return ctx, label
        raise CaseGap(f"{label}: no joint linkage")
    if sc == 4:
        label = "L4/e/S4-extension"
        _h5_link_member_pair(ctx, s1, t1, label)
        inner = [t for t in ctx.positions if ctx.positions[t] in INNER_SQUARE]
        _finish(ctx, inner, max_col=1, label=label)
        return ctx, label
    # three in the square: the pair member plus two singletons
    if t1 in LAST_COL:
        label = "L4/e/S3-t1-in-B"
    else:
        label = "L4/e/S3-t1-in-row"
    _h5_link_member_pair(ctx, s1, t1, label)
    inner = [t for t in ctx.positions if ctx.positions[t] in INNER_SQUARE]
    anchor_options = _free_anchor_pairs(ctx)
    for anchors in anchor_options:
        try:
            _mate_to_anchors(ctx, inner[0], inner[1], anchors, label)
            _finish(ctx, label=label, max_col=1)
            return ctx, label
        except CaseGap:
            continue
    raise CaseGap(f"{label}: no anchor pair worked")


def _h5_link_member_pair(ctx: RoutingContext, s1: Vertex, t1: Vertex, label: str) -> None:
    """Linkage for a pair with one member inside the square: row-then-column
    toward a last-column partner, column-then-row toward a last-row one."""
    if t1 in LAST_COL:
        walk = _row_walk(s1, 3) + tuple(unique_l_path((s1[0], 3), t1)[1:])
    else:
        walk = _col_walk(s1, 3) + tuple(unique_l_path((3, s1[1]), t1)[1:])
    path = Path(walk)
    if not set(path.edges()) <= ctx.free:
        raise CaseGap(f"{label}: prescribed linkage blocked")
    ctx.finish_link(0, path)


def _free_anchor_pairs(ctx: RoutingContext):
    """Anchor pairs for escaping two terminals: free or freed boundary
    vertices, preferring the last row, then one last-column anchor."""
    avail = [v for v in sorted(BOUNDARY) if ctx.is_free_vertex(v)]
    used_col = _col_exits_used(ctx)
    inplace_col = sum(1 for p in ctx.positions.values() if p in COL_ONLY)
    col_budget = 1 - used_col - inplace_col
    out = []
    row_avail = [v for v in avail if v in LAST_ROW]
    col_avail = [v for v in avail if v in COL_ONLY]
    for pair in itertools.combinations(row_avail, 2):
        out.append(pair)
    if col_budget >= 1:
        for r in row_avail:
            for c in col_avail:
                out.append((r, c))
    return out


# ---------------------------------------------------------------------------
# Family with six terminals: two pairs, two singletons.
# ---------------------------------------------------------------------------


def route_heavy6(cfg: TerminalConfig, strict: bool = False) -> tuple[EscapePlan, CaseTrace]:
    if family_of(cfg) is not LemmaId.HEAVY6:
        raise UnsupportedFamily("expected 2 pairs + 2 singletons")
    return _route_with_fallback(cfg, LemmaId.HEAVY6, _heavy6_case, strict)


def _heavy6_case(cfg: TerminalConfig):
    sc = _s_count(cfg)
    if sc == 1:
        return _h6_case_a(cfg)
    in_s = _pairs_within(cfg, INNER_SQUARE)
    if in_s:
        return _h6_case_b(cfg, in_s[0])
    in_a = _pairs_within(cfg, LAST_ROW)
    if in_a:
        return _h6_case_c(cfg, in_a[0])
    in_b = _pairs_within(cfg, LAST_COL)
    if in_b:
        return _h6_case_d(cfg, in_b[0])
    if sc == 2:
        return _h6_end_s2(cfg)
    if sc == 3:
        return _h6_end_s3(cfg)
    return _h6_end_s4(cfg)


def _h6_case_a(cfg: TerminalConfig):
    label = "L3/a/pair-on-L"
    ctx = RoutingContext.fresh(cfg)
    on_l = [i for i in _pairs_within(cfg, BOUNDARY)]
    if not on_l:
        raise CaseGap(f"{label}: no pair on the boundary")
    pi = on_l[0]
    a, b = cfg.pairs[pi]
    _link_with_walk(ctx, pi, unique_l_path(a, b))
    s_tid = [t for t in ctx.positions if ctx.positions[t] in INNER_SQUARE][0]
    stage1 = _first_trail(ctx, ctx.positions[s_tid], (3, 1), allowed=ctx.free - L_EDGES)
    if stage1 is None:
        raise CaseGap(f"{label}: no path to the row corner")
    # extend along the boundary until the first freed endpoint of the linkage
    stage2 = [(3, 1)]
    while stage2[-1] not in (a, b):
        nxt = unique_l_path(stage2[-1], (1, 3))
        if len(nxt) < 2:
            raise CaseGap(f"{label}: no linked endpoint along the walk")
        stage2.append(nxt[1])
    full = stage1 + Path(tuple(stage2))
    ctx.move(s_tid, full)
    ctx.finish_escape(s_tid)
    if set(cfg.pairs[pi]) <= LAST_ROW and _both_col_stub_occupied(ctx):
        other_end = a if full.end == b else b
        if ctx.is_free_vertex(other_end):
            ctx.shift((2, 3), other_end)
        else:
            _cascade_shift_through_corner(ctx, label)
    _finish(ctx, label=label, max_col=1)
    return ctx, label


def _h6_case_b(cfg: TerminalConfig, pi: int):
    ctx = RoutingContext.fresh(cfg)
    sc = _s_count(cfg)
    other = 1 - pi
    if sc == 2:
        label = "L3/b/S2"
        _link_search(ctx, pi, allowed=S_EDGES, label=label)
        if _both_col_stub_occupied(ctx):
            w = next(
                (v for v in L_ORDER if ctx.is_free_vertex(v) and v not in COL_ONLY),
                None,
            )
            if w is None:
                raise CaseGap(f"{label}: no free vertex for the shift")
            ctx.shift((2, 3), w)
        _finish(ctx, label=label, max_col=1)
        return ctx, label
    if set(cfg.pairs[other]) <= BOUNDARY:
        label = "L3/b/other-pair-on-L"
        oa, ob = cfg.pairs[other]
        _link_with_walk(ctx, other, unique_l_path(oa, ob))
        inner = [t for t in ctx.positions if t[0] == "s" and ctx.positions[t] in INNER_SQUARE]
        _link_and_escape(ctx, [pi], inner, max_col=1, label=label)
        return ctx, label
    if sc == 3:
        label = "L3/b/S3"
        s2_tid = [
            t
            for t in ctx.positions
            if t[0] == "p" and t[1] == other and ctx.positions[t] in INNER_SQUARE
        ][0]
        if ctx.terminals_at((3, 1)):
            target = next(
                v
                for v in ((3, 2), (3, 3), (2, 3), (1, 3))
                if ctx.is_free_vertex(v)
            )
            ctx.shift((3, 1), target)
        pa, pb = cfg.pairs[pi]
        trails = _joint_trails(
            ctx,
            [(pa, pb), (ctx.positions[s2_tid], (3, 1))],
            allowed=QMB_EDGES | S_EDGES,
        )
        if trails is None:
            trails = _joint_trails(ctx, [(pa, pb), (ctx.positions[s2_tid], (3, 1))])
        if trails is None:
            raise CaseGap(f"{label}: no joint linkage and escape")
        ctx.finish_link(pi, trails[0])
        ctx.move(s2_tid, trails[1])
        ctx.finish_escape(s2_tid)
        if _both_col_stub_occupied(ctx):
            w2 = next(
                (v for v in ((3, 2), (3, 3), (3, 1)) if ctx.is_free_vertex(v)), None
            )
            if w2 is None:
                raise CaseGap(f"{label}: no free row vertex for the column shift")
            ctx.shift((2, 3), w2)
        _finish(ctx, label=label, max_col=1)
        return ctx, label
    # everything inside the square
    col_count = len(_terminals_in(cfg, COL_ONLY))
    pq = [t for t in ctx.positions if not (t[0] == "p" and t[1] == pi)
          and ctx.positions[t] in INNER_SQUARE]
    if col_count == 2:
        label = "L3/b/S4-col2"
        ctx.shift((2, 3), (3, 3))
        anchors = ((3, 1), (3, 2))
    elif col_count == 1:
        label = "L3/b/S4-col1"
        for v in ((3, 1), (3, 2)):
            if ctx.terminals_at(v) and ctx.is_free_vertex((3, 3)):
                ctx.shift(v, (3, 3))
        anchors = ((3, 1), (3, 2))
    else:
        label = "L3/b/S4-col0"
        w = next((v for v in ((3, 2), (3, 3)) if ctx.is_free_vertex(v)), None)
        if ctx.terminals_at((3, 1)):
            if w is None:
                raise CaseGap(f"{label}: no free row vertex")
            ctx.shift((3, 1), w)
        anchors = ((3, 1), (1, 3))
    _h6_b4_link_and_mate(ctx, pi, pq, anchors, label)
    _finish(ctx, label=label, max_col=1)
    return ctx, label


def _h6_b4_link_and_mate(ctx, pi, pq, anchors, label):
    """Link the square pair and mate p, q onto the anchors, trying the
    catalogued clips first and a joint search otherwise."""
    pa = ctx.positions[("p", pi, 0)]
    pb = ctx.positions[("p", pi, 1)]
    want = set(anchors)
    for name in sorted(clip_catalog()):
        clip = clip_catalog()[name]
        if {clip.u, clip.v} != want or not clip.edges <= ctx.free:
            continue
        covered = set(clip.covered())
        if not {ctx.positions[pq[0]], ctx.positions[pq[1]]} <= covered:
            continue
        core = _first_trail(ctx, pa, pb, allowed=S_EDGES - clip.edges)
        if core is None:
            continue
        try:
            mate_through_clip(ctx, clip, ctx.positions[pq[0]], ctx.positions[pq[1]])
        except ToolkitError:
            continue
        ctx.finish_link(pi, core)
        return
    x, y = ctx.positions[pq[0]], ctx.positions[pq[1]]
    u, v = anchors
    for a, b in (((x, u), (y, v)), ((x, v), (y, u))):
        trails = _joint_trails(ctx, [(pa, pb), a, b])
        if trails is not None:
            ctx.finish_link(pi, trails[0])
            ctx.move(pq[0], trails[1])
            ctx.move(pq[1], trails[2])
            ctx.reserved_exits.update(anchors)
            ctx.notes.append("clip:direct")
            return
    raise CaseGap(f"{label}: linkage plus mating failed")


def _h6_case_c(cfg: TerminalConfig, pi: int):
    ctx = RoutingContext.fresh(cfg)
    sc = _s_count(cfg)
    other = 1 - pi
    a, b = cfg.pairs[pi]
    if sc == 2:
        w = next(v for v in sorted(BOUNDARY) if ctx.is_free_vertex(v))
        _link_with_walk(ctx, pi, unique_l_path(a, b))
        inner = [t for t in ctx.positions if ctx.positions[t] in INNER_SQUARE]
        if w in LAST_ROW:
            label = "L3/c/S2-w-row"
            ctx.shift((2, 3), (3, 3))
            _mate_to_anchors(ctx, inner[0], inner[1], ((3, 1), (3, 2)), label)
        else:
            label = "L3/c/S2-w-col"
            _mate_to_anchors(ctx, inner[0], inner[1], (a, b), label)
        _finish(ctx, label=label, max_col=1)
        return ctx, label
    t2 = [v for v in cfg.pairs[other] if v in BOUNDARY][0]
    s2 = [v for v in cfg.pairs[other] if v in INNER_SQUARE][0]
    s2_tid = [t for t in ctx.positions if ctx.positions[t] == s2][0]
    singles = [t for t in _singleton_tids(ctx)]
    if t2 in LAST_COL:
        label = "L3/c/S3-t2-in-B"
        _link_with_walk(ctx, pi, unique_l_path(a, b))
        walk = _row_walk(s2, 3) + tuple(unique_l_path((s2[0], 3), t2)[1:])
        ctx.finish_link(other, Path(walk))
        _mate_to_anchors(ctx, singles[0], singles[1], ((3, 1), (3, 2)), label)
        _finish(ctx, label=label, max_col=1)
        return ctx, label
    label = "L3/c/S3-t2-in-row"
    _link_with_walk(ctx, pi, unique_l_path(a, b))
    core = _first_trail(
        ctx, s2, t2, allowed=col_edges(s2[1]) | row_edges(s2[0]) | {edge((3, 1), (3, 2))}
    )
    if core is not None:
        ctx.finish_link(other, core)
        for u in ((3, 1), (3, 2), (3, 3)):
            if not ctx.is_free_vertex(u):
                continue
            try:
                _mate_to_anchors(ctx, singles[0], singles[1], (u, (1, 3)), label)
                break
            except CaseGap:
                continue
        else:
            raise CaseGap(f"{label}: no row anchor admits the mating")
        _finish(ctx, label=label, max_col=1)
        return ctx, label
    # the prescribed lane is blocked: pack the linkage and matings jointly
    _link_and_escape(
        ctx,
        [other],
        singles,
        candidates=[(3, 1), (3, 2), (3, 3), (1, 3)],
        max_col=1,
        label=label,
    )
    return ctx, label


def _h6_case_d(cfg: TerminalConfig, pi: int):
    ctx = RoutingContext.fresh(cfg)
    sc = _s_count(cfg)
    other = 1 - pi
    a, b = cfg.pairs[pi]
    pair = set(cfg.pairs[pi])
    _link_with_walk(ctx, pi, unique_l_path(a, b))
    if sc == 2:
        inner = [t for t in ctx.positions if ctx.positions[t] in INNER_SQUARE]
        b_clear = all(
            not ctx.terminals_at(v) for v in sorted(LAST_COL - pair)
        )
        if b_clear:
            label = "L3/d/S2-all-B-free"
            try:
                _mate_to_anchors(ctx, inner[0], inner[1], ((3, 3), (1, 3)), label)
            except CaseGap:
                _mate_to_anchors(
                    ctx, inner[0], inner[1], ((3, 3), (2, 3)), label
                )
            _finish(ctx, label=label, max_col=1)
            return ctx, label
        if CORNER in pair:
            label = "L3/d/S2-corner-pair"
            w = next(
                (v for v in ((3, 1), (3, 2)) if ctx.is_free_vertex(v)), None
            )
            if w is not None:
                _mate_to_anchors(ctx, inner[0], inner[1], (w, (3, 3)), label)
                _finish(ctx, label=label, max_col=1)
                return ctx, label
        label = "L3/d/S2-colpair"
        _finish(ctx, inner, max_col=1, label=label)
        return ctx, label
    label = "L3/d/S3"
    t2 = [v for v in cfg.pairs[other] if v in BOUNDARY][0]
    s2 = [v for v in cfg.pairs[other] if v in INNER_SQUARE][0]
    singles = _singleton_tids(ctx)
    if t2 in ROW_ONLY:
        allowed = col_edges(s2[1]) | {edge((3, 1), (3, 2))}
        core = _first_trail(ctx, s2, t2, allowed=allowed)
    else:
        allowed = col_edges(s2[1]) | row_edges(2) | col_edges(3) | row_edges(s2[0])
        core = _first_trail(ctx, s2, t2, allowed=allowed)
    if core is None:
        core = _first_trail(ctx, s2, t2)
    if core is None:
        raise CaseGap(f"{label}: no linkage for the second pair")
    ctx.finish_link(other, core)
    z = (1, 3)
    if not ctx.is_free_vertex(z):
        raise CaseGap(f"{label}: the column anchor is occupied")
    for u in ((3, 1), (3, 2), (3, 3)):
        if not ctx.is_free_vertex(u):
            continue
        try:
            _mate_to_anchors(ctx, singles[0], singles[1], (u, z), label)
            break
        except CaseGap:
            continue
    else:
        raise CaseGap(f"{label}: no row anchor admits the mating")
    _finish(ctx, label=label, max_col=1)
    return ctx, label


def _h6_end_s2(cfg: TerminalConfig):
    ctx = RoutingContext.fresh(cfg)
    inner = [t for t in sorted(ctx.positions) if ctx.positions[t] in INNER_SQUARE]
    inner_singles = [t for t in inner if t[0] == "s"]
    if len(inner_singles) == 2:
        label = "L3/end/S2-two-singles"
        pi = next(
            i for i, p in enumerate(cfg.pairs) if (2, 3) in p
        ) if any((2, 3) in p for p in cfg.pairs) else None
        if pi is None:
            raise CaseGap(f"{label}: expected a pair holding (2,3)")
        s1 = (2, 3)
        t1 = [v for v in cfg.pairs[pi] if v != s1][0]
        if t1 == (3, 2):
            walk = ((2, 3), (2, 2), (3, 2))
        else:
            walk = ((2, 3), (2, 2), (3, 2), (3, 1))
        _link_with_walk(ctx, pi, walk)
        _mate_to_anchors(ctx, inner_singles[0], inner_singles[1], (t1, (3, 3)), label)
        _finish(ctx, label=label, max_col=1)
        return ctx, label
    inner_members = [t for t in inner if t[0] == "p"]
    if len(inner_members) == 2:
        # no singleton inside the square: both pairs link off the corner
        label = "L3/end/S2-two-members"
        corner_tids = ctx.terminals_at(CORNER)
        if corner_tids and corner_tids[0][0] == "p":
            ctx.shift(CORNER, (3, 2))
        off_corner = {e for e in ctx.free if CORNER not in e}
        eps = [
            (ctx.positions[("p", i, 0)], ctx.positions[("p", i, 1)]) for i in (0, 1)
        ]
        trails = _joint_trails(ctx, eps, allowed=off_corner)
        if trails is None:
            raise CaseGap(f"{label}: no 2-linkage off the corner")
        ctx.finish_link(0, trails[0])
        ctx.finish_link(1, trails[1])
        if _both_col_stub_occupied(ctx):
            ctx.shift((2, 3), (3, 3))
        _finish(ctx, label=label, max_col=1)
        return ctx, label
    # one pair member and one singleton inside the square
    member = inner_members[0]
    single = [t for t in inner if t[0] == "s"][0]
    pi = member[1]
    other = 1 - pi
    s2 = [v for v in cfg.pairs[other] if v in ROW_ONLY][0]
    t2 = [v for v in cfg.pairs[other] if v in COL_ONLY][0]
    t1 = ctx.positions[partner(member)]
    w = next(v for v in sorted(BOUNDARY) if ctx.is_free_vertex(v))
    if w in ROW_ONLY:
        label = "L3/end/S2-w-row"
        _link_with_walk(ctx, other, unique_l_path(s2, t2))
        _mate_to_anchors(ctx, member, single, (s2, w), label)
        _finish(ctx, label=label, max_col=1)
        return ctx, label
    if t1 in ROW_ONLY:
        label = "L3/end/S2-t1-row"
        s1 = ctx.positions[member]
        walk = _col_walk(s1, 3) + tuple(unique_l_path((3, s1[1]), t1)[1:])
        path = Path(walk)
        if not set(path.edges()) <= ctx.free:
            raise CaseGap(f"{label}: prescribed linkage blocked")
        ctx.finish_link(pi, path)
        mate = _first_trail(ctx, ctx.positions[single], t1, allowed=QMB_EDGES)
        if mate is None:
            raise CaseGap(f"{label}: no mating path outside the last column")
        ctx.move(single, mate)
        ctx.finish_escape(single)
        if _both_col_stub_occupied(ctx):
            _cascade_shift_through_corner(ctx, label)
        _finish(ctx, label=label, max_col=1)
        return ctx, label
    label = "L3/end/S2-B"
    s1 = ctx.positions[member]
    walk = _row_walk(s1, 3) + tuple(unique_l_path((s1[0], 3), t1)[1:])
    path = Path(walk)
    if not set(path.edges()) <= ctx.free:
        raise CaseGap(f"{label}: prescribed linkage blocked")
    ctx.finish_link(pi, path)
    mate = _first_trail(ctx, ctx.positions[single], (3, 3))
    if mate is None:
        raise CaseGap(f"{label}: no mating path to the corner")
    ctx.move(single, mate)
    ctx.finish_escape(single)
    _finish(ctx, label=label, max_col=1)
    return ctx, label


def _h6_end_s3(cfg: TerminalConfig):
    ctx = RoutingContext.fresh(cfg)
    inner_members = sorted(
        t for t in ctx.positions if t[0] == "p" and ctx.positions[t] in INNER_SQUARE
    )
    l_residents = _terminals_in(cfg, BOUNDARY)
    col_res = [v for v in l_residents if v in COL_ONLY]
    if len(inner_members) == 2:
        pair_ts = {ctx.positions[partner(m)] for m in inner_members}
        if len(col_res) == 0:
            label = "L3/end/S3-col0"
            m = inner_members[0]
            return _h6_s3_link_and_clip(ctx, m, "row", ((1, 3),), label)
        if len(col_res) == 2:
            label = "L3/end/S3-col2"
            m = next(
                m for m in inner_members if ctx.positions[partner(m)] in COL_ONLY
            )
            free_rows = [v for v in ((3, 1), (3, 2), (3, 3)) if ctx.is_free_vertex(v)]
            return _h6_s3_link_and_clip(
                ctx, m, "col", tuple(free_rows), label, anchor_mode="pair"
            )
        # exactly one boundary resident on the column stub
        col_is_pair_t = col_res[0] in pair_ts
        if col_is_pair_t:
            label = "L3/end/S3-t-col"
            m = next(
                m for m in inner_members if ctx.positions[partner(m)] == col_res[0]
            )
            u = next(v for v in ((3, 1), (3, 2), (3, 3)) if ctx.is_free_vertex(v))
            return _h6_s3_link_and_clip(
                ctx, m, "col", (u, ctx.positions[partner(m)]), label, anchor_mode="fixed"
            )
        if ctx.is_free_vertex((3, 3)):
            label = "L3/end/S3-corner-free"
            m = inner_members[0]
            t1 = ctx.positions[partner(m)]
            return _h6_s3_link_and_clip(
                ctx, m, "row", ((3, 3), t1), label, anchor_mode="fixed"
            )
        label = "L3/end/S3-corner-taken"
        m = next(
            (m for m in inner_members if ctx.positions[partner(m)] == (3, 3)),
            inner_members[0],
        )
        w = next(v for v in ((3, 1), (3, 2)) if ctx.is_free_vertex(v))
        return _h6_s3_link_and_clip(
            ctx, m, "col", (w, ctx.positions[partner(m)]), label, anchor_mode="fixed"
        )
    # one pair member and two singletons inside the square
    m = inner_members[0]
    t1 = ctx.positions[partner(m)]
    if t1 in COL_ONLY:
        label = "L3/end/S3-col2"
        free_rows = [v for v in ((3, 1), (3, 2), (3, 3)) if ctx.is_free_vertex(v)]
        return _h6_s3_link_and_clip(ctx, m, "col", tuple(free_rows), label, anchor_mode="pair")
    if t1 == (3, 3):
        label = "L3/end/S3-corner-taken"
        w = next(v for v in ((3, 1), (3, 2)) if ctx.is_free_vertex(v))
        return _h6_s3_link_and_clip(ctx, m, "col", (w, t1), label, anchor_mode="fixed")
    label = "L3/end/S3-corner-free"
    return _h6_s3_link_and_clip(ctx, m, "row", ((3, 3), t1), label, anchor_mode="fixed")


def _h6_s3_link_and_clip(ctx, member, link_mode, anchors, label, anchor_mode="ab"):
    """Shared tail for the three-in-square endgame: link the member's pair
    along the prescribed route, then mate the two remaining inner terminals
    onto boundary anchors."""
    s1 = ctx.positions[member]
    t1 = ctx.positions[partner(member)]
    if link_mode == "row":
        walk = _col_walk(s1, 3) + tuple(unique_l_path((3, s1[1]), t1)[1:])
    else:
        walk = _row_walk(s1, 3) + tuple(unique_l_path((s1[0], 3), t1)[1:])
    path = Path(walk)
    if not set(path.edges()) <= ctx.free:
        raise CaseGap(f"{label}: prescribed linkage blocked")
    ctx.finish_link(member[1], path)
    rest = sorted(t for t in ctx.positions if ctx.positions[t] in INNER_SQUARE)
    if len(rest) != 2:
        raise CaseGap(f"{label}: expected two inner terminals, got {rest}")
    if anchor_mode == "fixed":
        _mate_to_anchors(ctx, rest[0], rest[1], (anchors[0], anchors[1]), label)
    elif anchor_mode == "pair":
        pairs = list(itertools.combinations(anchors, 2))
        for cand in pairs:
            try:
                _mate_to_anchors(ctx, rest[0], rest[1], cand, label)
                break
            except CaseGap:
                continue
        else:
            raise CaseGap(f"{label}: no anchor pair worked")
    else:
        u = next(v for v in ((3, 1), (3, 2), (3, 3)) if ctx.is_free_vertex(v))
        _mate_to_anchors(ctx, rest[0], rest[1], (u, anchors[0]), label)
    _finish(ctx, label=label, max_col=1)
    return ctx, label


def _h6_end_s4(cfg: TerminalConfig):
    ctx = RoutingContext.fresh(cfg)
    l_res = _terminals_in(cfg, BOUNDARY)
    col_res = [v for v in l_res if v in COL_ONLY]
    diag_1 = frozenset({(1, 1), (2, 2)})
    diag_2 = frozenset({(1, 2), (2, 1)})

    def diagonal_of(v):
        return diag_1 if v in diag_1 else diag_2

    if len(col_res) == 0 and CORNER not in l_res:
        label = "L3/end/S4-rows"
        pi = next(i for i, p in enumerate(cfg.pairs) if set(p) & set(l_res))
        t1 = [v for v in cfg.pairs[pi] if v in BOUNDARY][0]
        s1 = [v for v in cfg.pairs[pi] if v in INNER_SQUARE][0]
        mate = sorted(diagonal_of(s1) - {s1})[0]
        region = col_edges(1) | col_edges(2) | row_edges(3)
        trails = _joint_trails(ctx, [(s1, t1), (mate, t1)], allowed=region)
        if trails is None:
            raise CaseGap(f"{label}: diagonal split failed")
        ctx.finish_link(pi, trails[0])
        mate_tid = _tid_at(ctx, mate)
        ctx.move(mate_tid, trails[1])
        ctx.finish_escape(mate_tid)
        others = sorted((diag_1 | diag_2) - diagonal_of(s1))
        row1_v = [v for v in others if v[0] == 1][0]
        row2_v = [v for v in others if v[0] == 2][0]
        tid1 = _tid_at(ctx, row1_v)
        p1 = Path(_row_walk(row1_v, 3))
        ctx.move(tid1, p1)
        ctx.finish_escape(tid1)
        tid2 = _tid_at(ctx, row2_v)
        p2 = Path(_row_walk(row2_v, 3) + ((3, 3),))
        ctx.move(tid2, p2)
        ctx.finish_escape(tid2)
        _finish(ctx, label=label, max_col=1)
        return ctx, label
    if len(col_res) == 2:
        label = "L3/end/S4-cols"
        pi = next(i for i, p in enumerate(cfg.pairs) if (2, 3) in p)
        s_k = [v for v in cfg.pairs[pi] if v in INNER_SQUARE][0]
        mate = sorted(diagonal_of(s_k) - {s_k})[0]
        region = row_edges(1) | row_edges(2) | col_edges(3)
        trails = _joint_trails(ctx, [(s_k, (2, 3)), (mate, (2, 3))], allowed=region)
        if trails is None:
            raise CaseGap(f"{label}: diagonal split failed")
        ctx.finish_link(pi, trails[0])
        mate_tid = _tid_at(ctx, mate)
        ext = trails[1] + _walk((2, 3), (3, 3))
        ctx.move(mate_tid, ext)
        ctx.finish_escape(mate_tid)
        others = sorted((diag_1 | diag_2) - diagonal_of(s_k))
        _finish(
            ctx,
            [_tid_at(ctx, v) for v in others],
            candidates=[(3, 1), (3, 2)],
            max_col=1,
            label=label,
        )
        return ctx, label
    if CORNER in l_res and len(col_res) == 0:
        label = "L3/end/S4-corner"
        pi = next(i for i, p in enumerate(cfg.pairs) if CORNER in p)
        s_k = [v for v in cfg.pairs[pi] if v in INNER_SQUARE][0]
        mate = sorted(diagonal_of(s_k) - {s_k})[0]
        region = row_edges(1) | row_edges(2) | col_edges(3)
        trails = _joint_trails(ctx, [(s_k, (2, 3)), (mate, (2, 3))], allowed=region)
        if trails is None:
            raise CaseGap(f"{label}: diagonal split failed")
        link_walk = trails[0] + _walk((2, 3), (3, 3))
        ctx.finish_link(pi, link_walk)
        mate_tid = _tid_at(ctx, mate)
        ctx.move(mate_tid, trails[1])
        ctx.finish_escape(mate_tid)
        others = sorted((diag_1 | diag_2) - diagonal_of(s_k))
        free_row = [v for v in ((3, 1), (3, 2)) if ctx.is_free_vertex(v)]
        _finish(
            ctx,
            [_tid_at(ctx, v) for v in others],
            candidates=[(3, 3)] + free_row,
            allowed=col_edges(1) | col_edges(2) | row_edges(3) | S_EDGES,
            max_col=1,
            label=label,
        )
        return ctx, label
    label = "L3/end/S4-mixed"
    t1 = col_res[0]
    pi = next(i for i, p in enumerate(cfg.pairs) if t1 in p)
    s1 = [v for v in cfg.pairs[pi] if v in INNER_SQUARE][0]
    mate = sorted(diagonal_of(s1) - {s1})[0]
    region = row_edges(1) | row_edges(2) | col_edges(3)
    trails = _joint_trails(ctx, [(s1, t1), (mate, t1)], allowed=region)
    if trails is None:
        raise CaseGap(f"{label}: diagonal split failed")
    ctx.finish_link(pi, trails[0])
    mate_tid = _tid_at(ctx, mate)
    ctx.move(mate_tid, trails[1])
    ctx.finish_escape(mate_tid)
    others = sorted((diag_1 | diag_2) - diagonal_of(s1))
    free_row = [v for v in sorted(LAST_ROW) if ctx.is_free_vertex(v)]
    _finish(
        ctx,
        [_tid_at(ctx, v) for v in others],
        candidates=free_row,
        allowed=col_edges(1) | col_edges(2) | row_edges(3) | S_EDGES,
        max_col=1,
        label=label,
    )
    return ctx, label


# ---------------------------------------------------------------------------
# Family with seven or eight terminals: 4 pairs, or 3 pairs + 1 singleton.
# ---------------------------------------------------------------------------


def route_heavy78(cfg: TerminalConfig, strict: bool = False) -> tuple[EscapePlan, CaseTrace]:
    if family_of(cfg) is not LemmaId.HEAVY78:
        raise UnsupportedFamily("expected 4 pairs, or 3 pairs + 1 singleton")
    return _route_with_fallback(cfg, LemmaId.HEAVY78, _heavy78_case, strict)


def _heavy78_case(cfg: TerminalConfig):
    sc = _s_count(cfg)
    if sc == 2:
        return _h78_case_a(cfg)
    if sc == 3:
        return _h78_case_b(cfg)
    return _h78_case_c(cfg)


def _h78_case_a(cfg: TerminalConfig):
    ctx = RoutingContext.fresh(cfg)
    in_s = _pairs_within(cfg, INNER_SQUARE)
    inner = [t for t in sorted(ctx.positions) if ctx.positions[t] in INNER_SQUARE]
    if in_s:
        label = "L2/a/pair-in-S"
        _link_search(ctx, in_s[0], allowed=S_EDGES, label=label)
        second = next(i for i in range(len(cfg.pairs)) if i != in_s[0])
        sa, sb = cfg.pairs[second]
        _link_with_walk(ctx, second, unique_l_path(sa, sb))
        _finish(ctx, label=label)
        return ctx, label
    if all(t[0] == "p" for t in inner):
        label = "L2/a/two-members"
        p1, p2 = inner[0][1], inner[1][1]
        _link_many(ctx, [p1, p2], label=label)
        _finish(ctx, label=label)
        return ctx, label
    label = "L2/a/member-and-singleton"
    h_edges = L_EDGES | {edge((2, 2), (2, 3)), edge((2, 2), (3, 2))}
    l_pairs = _pairs_within(cfg, BOUNDARY)
    if len(l_pairs) < 2:
        raise CaseGap(f"{label}: expected two boundary pairs")
    _link_many(ctx, l_pairs[:2], allowed=h_edges, label=label)
    _finish(ctx, inner, label=label)
    return ctx, label


def _h78_case_b(cfg: TerminalConfig):
    in_s = _pairs_within(cfg, INNER_SQUARE)
    if in_s:
        ctx = RoutingContext.fresh(cfg)
        inner_rest = [
            t
            for t in sorted(ctx.positions)
            if ctx.positions[t] in INNER_SQUARE
            and not (t[0] == "p" and t[1] == in_s[0])
        ]
        if inner_rest and inner_rest[0][0] == "p":
            label = "L2/b/pair-plus-member"
            _link_many(ctx, [in_s[0], inner_rest[0][1]], label=label)
            _finish(ctx, label=label)
            return ctx, label
        return _h78_b2(cfg, in_s[0])
    members = [
        v for v in _terminals_in(cfg, INNER_SQUARE)
        if any(v in p for p in cfg.pairs)
    ]
    if len(members) == 3:
        return _h78_b3(cfg, escaping=None)
    return _h78_b4(cfg)


def _h78_b2(cfg: TerminalConfig, pi: int):
    label = "L2/b/pair-plus-singleton"
    ctx = RoutingContext.fresh(cfg)
    s0 = [v for v in cfg.singletons if v in INNER_SQUARE][0]
    s0_tid = _tid_at(ctx, s0)
    reduced = [e for e in S_EDGES if s0 not in e]
    _link_search(ctx, pi, allowed=reduced, label=label)
    target = (3, s0[1])
    walk = _col_walk(s0, 3)
    ctx.move(s0_tid, Path(walk))
    occupant = [t for t in ctx.positions if ctx.positions[t] == target and t != s0_tid]
    link_second = None
    for i in range(len(cfg.pairs)):
        if i == pi:
            continue
        if occupant and occupant[0][0] == "p" and occupant[0][1] == i:
            link_second = i
            break
    if link_second is None:
        link_second = next(
            i
            for i in range(len(cfg.pairs))
            if i != pi and set(cfg.pairs[i]) <= BOUNDARY
        )
    if occupant and not (occupant[0][0] == "p" and occupant[0][1] == link_second):
        raise CaseGap(f"{label}: landing vertex hosts an unlinked terminal")
    oa, ob = cfg.pairs[link_second]
    _link_with_walk(ctx, link_second, unique_l_path(oa, ob))
    ctx.finish_escape(s0_tid)
    _finish(ctx, label=label)
    return ctx, label


def _h78_b3(cfg: TerminalConfig, escaping):
    """Frame on the inner 4-cycle: the two members closest to the center
    attach there; the third inner terminal escapes along the outer lane."""
    label = "L2/b/three-members" if escaping is None else "L2/b/members-and-singleton"
    ctx = RoutingContext.fresh(cfg)
    inner = _terminals_in(cfg, INNER_SQUARE)
    if escaping is None:
        ranked = sorted(inner, key=lambda v: (abs(v[0] - 2) + abs(v[1] - 2), v))
        attach_vs = ranked[:2]
        escaper_v = ranked[2]
    else:
        attach_vs = sorted(v for v in inner if v != escaping)
        escaper_v = escaping
    pis = []
    attaches = []
    for v in attach_vs:
        tid = _tid_at(ctx, v)
        if tid[0] != "p":
            raise CaseGap(f"{label}: attach terminal {v} is not a pair member")
        pis.append(tid[1])
        if v == (2, 2):
            attaches.append(Path(((2, 2),)))
        else:
            attaches.append(_walk(v, (2, 2)))
    frame = FrameSpec(cycle=INNER_CYCLE_4, anchor=(2, 2), attach=tuple(attaches))
    mates = []
    for pi in pis:
        t_v = [v for v in cfg.pairs[pi] if v not in INNER_SQUARE][0]
        if t_v in ((2, 3), (3, 3), (3, 2)):
            mates.append(Path((t_v,)))
        elif t_v == (1, 3):
            mates.append(_walk((1, 3), (2, 3)))
        else:
            mates.append(_walk((3, 1), (3, 2)))
    trail1, trail2 = complete_frame(ctx, frame, mates[0], mates[1])
    ctx.finish_link(pis[0], trail1)
    ctx.finish_link(pis[1], trail2)
    esc_tid = _tid_at(ctx, escaper_v)
    _finish(
        ctx,
        [esc_tid],
        candidates=[(3, 1), (1, 3), (3, 2), (2, 3), (3, 3)],
        label=label,
    )
    return ctx, label


def _h78_b4(cfg: TerminalConfig):
    s0 = [v for v in cfg.singletons if v in INNER_SQUARE][0]
    if s0 == (1, 1):
        return _h78_b3(cfg, escaping=s0)
    sub = cfg.reflected() if s0 == (2, 1) else cfg
    s0 = (1, 2) if s0 == (2, 1) else s0
    if s0 == (2, 2):
        members = {v for v in _terminals_in(sub, INNER_SQUARE) if v != s0}
        if (2, 1) not in members:
            # mirror so one member sits on the cycle below the top row
            sub = sub.reflected()
    return _h78_b4_column(sub)


def _h78_b4_column(cfg: TerminalConfig):
    """Singleton on the middle column: frame on the six-cycle below the top
    row, escape the singleton at the top-right stub."""
    label = "L2/b/members-and-singleton"
    ctx = RoutingContext.fresh(cfg)
    s0 = [v for v in cfg.singletons if v in INNER_SQUARE][0]
    members = sorted(v for v in _terminals_in(cfg, INNER_SQUARE) if v != s0)
    p0_walk = _col_walk(s0, 1) + tuple(_row_walk((1, s0[1]), 3)[1:])
    p0 = Path(p0_walk)
    cyc = CYCLE_6_NO_ROW1
    cyc_edges = cycle_edges(cyc)
    allowed = (S_EDGES - set(p0.edges())) - cyc_edges
    trails, _, _ = kernel.solve_trails(ctx.grid, allowed & ctx.free, [tuple(members)])
    if trails is None:
        raise CaseGap(f"{label}: no inner connector avoiding the cycle")
    p12 = trails[0]
    y = next(v for v in p12.vertices if v in cyc)
    i_y = p12.vertices.index(y)
    # attach paths run member -> anchor along the two halves of the connector
    attach_a = Path(tuple(p12.vertices[: i_y + 1]))
    attach_b = Path(tuple(reversed(p12.vertices[i_y:])))
    pis = []
    for v in members:
        tid = _tid_at(ctx, v)
        if tid[0] != "p":
            raise CaseGap(f"{label}: inner terminal {v} is not a pair member")
        pis.append(tid[1])
    frame = FrameSpec(cycle=cyc, anchor=y, attach=(attach_a, attach_b))
    mates = []
    for pi in pis:
        t_v = [x for x in cfg.pairs[pi] if x not in INNER_SQUARE][0]
        if t_v in cyc:
            mates.append(Path((t_v,)))
        elif t_v == (1, 3):
            mates.append(_walk((1, 3), (2, 3)))
        else:
            raise CaseGap(f"{label}: mate {t_v} off the cycle")
    trail1, trail2 = complete_frame(ctx, frame, mates[0], mates[1])
    ctx.finish_link(pis[0], trail1)
    ctx.finish_link(pis[1], trail2)
    # resolve the top-right stub for the singleton's escape
    z = (1, 3)
    s0_tid = _tid_at(ctx, s0)
    third = next(
        i for i in range(len(cfg.pairs)) if i not in pis
    )
    occupants = ctx.terminals_at(z)
    if occupants:
        occ = occupants[0]
        if occ[0] == "p" and occ[1] == third:
            if (2, 3) in cfg.pairs[third]:
                _link_with_walk(ctx, third, ((1, 3), (2, 3)))
            else:
                if not ctx.is_free_vertex((2, 3)):
                    raise CaseGap(f"{label}: cannot clear the stub")
                ctx.shift(z, (2, 3))
        else:
            raise CaseGap(f"{label}: unexpected occupant at the stub")
    if not set(p0.edges()) <= ctx.free:
        raise CaseGap(f"{label}: escape lane blocked")
    ctx.move(s0_tid, p0)
    ctx.finish_escape(s0_tid)
    _finish(ctx, label=label)
    return ctx, label


def _h78_case_c(cfg: TerminalConfig):
    in_s = _pairs_within(cfg, INNER_SQUARE)
    if len(in_s) >= 2:
        ctx = RoutingContext.fresh(cfg)
        label = "L2/c/two-pairs"
        _link_many(ctx, in_s[:2], label=label)
        _finish(ctx, label=label)
        return ctx, label
    if len(in_s) == 1:
        return _h78_c2(cfg, in_s[0])
    center = (2, 2)
    center_tid_is_member = any(center in p for p in cfg.pairs)
    if center_tid_is_member:
        return _h78_c3_member(cfg)
    return _h78_c3_singleton(cfg)


def _h78_c2(cfg: TerminalConfig, pi: int):
    label = "L2/c/pair-plus-two"
    ctx = RoutingContext.fresh(cfg)
    others = sorted(
        v for v in _terminals_in(cfg, INNER_SQUARE) if v not in set(cfg.pairs[pi])
    )
    # linkage inside the square avoiding the far corner as an interior vertex
    pa, pb = cfg.pairs[pi]
    p1 = None
    for cand in _inner_trails(pa, pb):
        if (1, 1) not in cand.vertices[1:-1]:
            p1 = cand
            break
    if p1 is None:
        raise CaseGap(f"{label}: no inner linkage avoiding the corner")
    ctx.finish_link(pi, p1)
    for first, second in (others, list(reversed(others))):
        first_tid, second_tid = _tid_at(ctx, first), _tid_at(ctx, second)
        if first_tid[0] != "p":
            continue
        t2 = ctx.positions[partner(first_tid)]
        trails = _joint_trails(ctx, [(first, t2), (second, t2)])
        if trails is None:
            continue
        ctx.finish_link(first_tid[1], trails[0])
        sec = _tid_at(ctx, second)
        ctx.move(sec, trails[1])
        ctx.finish_escape(sec)
        _finish(ctx, label=label)
        return ctx, label
    raise CaseGap(f"{label}: through-link failed")


def _inner_trails(a: Vertex, b: Vertex):
    """All trails between two distinct inner-square vertices using square
    edges only, shortest first, deterministic."""
    sq = sorted(INNER_SQUARE)
    out = []

    def walk(cur, used, path):
        if cur == b and len(path) > 1:
            out.append(Path(tuple(path)))
        for w in sq:
            if abs(w[0] - cur[0]) + abs(w[1] - cur[1]) != 1:
                continue
            e = edge(cur, w)
            if e in S_EDGES and e not in used:
                walk(w, used | {e}, path + [w])

    walk(a, set(), [a])
    out.sort(key=lambda p: (len(p.vertices), p.vertices))
    return out


def _h78_c3_member(cfg: TerminalConfig):
    label = "L2/c/no-pair-center-member"
    plan_cfg = cfg
    flipped = False
    if not any((2, 1) in p for p in plan_cfg.pairs):
        plan_cfg = cfg.reflected()
        flipped = True
    ctx = RoutingContext.fresh(plan_cfg)
    p_center = next(i for i, p in enumerate(plan_cfg.pairs) if (2, 2) in p)
    p_left = next(i for i, p in enumerate(plan_cfg.pairs) if (2, 1) in p)
    if p_center == p_left:
        raise CaseGap(f"{label}: center and left member share a pair")
    frame = FrameSpec(
        cycle=INNER_CYCLE_4,
        anchor=(2, 2),
        attach=(Path(((2, 2),)), _walk((2, 1), (2, 2))),
    )
    mates = []
    for pi in (p_center, p_left):
        t_v = [x for x in plan_cfg.pairs[pi] if x not in INNER_SQUARE][0]
        if t_v in ((2, 3), (3, 3), (3, 2)):
            mates.append(Path((t_v,)))
        elif t_v == (1, 3):
            mates.append(_walk((1, 3), (2, 3)))
        else:
            mates.append(_walk((3, 1), (3, 2)))
    trail1, trail2 = complete_frame(ctx, frame, mates[0], mates[1])
    ctx.finish_link(p_center, trail1)
    ctx.finish_link(p_left, trail2)
    _h78_c3_outer_escapes(ctx, plan_cfg, label)
    _finish(ctx, label=label)
    return ctx, label


def _h78_c3_outer_escapes(ctx: RoutingContext, cfg: TerminalConfig, label: str) -> None:
    """Escape the terminals at (1,2) and (1,1) toward the two boundary
    stubs.  If such a terminal's own mate sits on the stub or just past it,
    the escape becomes a linkage; any other unresolved stub occupant shifts
    one stop along the boundary first."""
    stub_specs = (
        (
            (1, 2),
            (1, 3),
            (2, 3),
            frozenset({edge((1, 2), (1, 3))}),
            frozenset(
                {
                    edge((1, 2), (1, 3)),
                    edge((1, 3), (2, 3)),
                    edge((1, 2), (2, 2)),
                    edge((2, 2), (2, 3)),
                }
            ),
        ),
        (
            (1, 1),
            (3, 1),
            (3, 2),
            col_edges(1),
            col_edges(1)
            | frozenset(
                {edge((3, 1), (3, 2)), edge((2, 1), (2, 2)), edge((2, 2), (3, 2))}
            ),
        ),
    )
    for origin, stub, lane, stub_edges, lane_region in stub_specs:
        tid = _tid_at(ctx, origin)
        mate_pos = ctx.positions.get(partner(tid)) if tid[0] == "p" else None
        occupants = ctx.terminals_at(stub)
        if not occupants:
            esc = _first_trail(ctx, origin, stub, allowed=stub_edges)
            if esc is None:
                raise CaseGap(f"{label}: escape lane to {stub} blocked")
            ctx.move(tid, esc)
            ctx.finish_escape(tid)
            continue
        if mate_pos == stub:
            core = _first_trail(ctx, origin, stub, allowed=stub_edges)
            if core is None:
                raise CaseGap(f"{label}: conflict linkage to {stub} blocked")
            ctx.finish_link(tid[1], core)
            continue
        if not ctx.terminals_at(lane):
            ctx.shift(stub, lane)
            esc = _first_trail(ctx, origin, stub, allowed=stub_edges)
            if esc is None:
                raise CaseGap(f"{label}: escape lane to {stub} blocked")
            ctx.move(tid, esc)
            ctx.finish_escape(tid)
            continue
        if mate_pos == lane:
            core = _first_trail(ctx, origin, lane, allowed=lane_region)
            if core is None:
                raise CaseGap(f"{label}: conflict linkage to {lane} blocked")
            ctx.finish_link(tid[1], core)
            continue
        raise CaseGap(f"{label}: stub and lane both blocked at {stub}")


def _h78_c3_singleton(cfg: TerminalConfig):
    sub = cfg
    flipped = False
    m21 = (2, 1)
    if _partner_of(sub, m21) == (2, 3):
        if _partner_of(sub, (1, 2)) != (3, 2):
            sub = cfg.reflected()
            flipped = True
        elif _partner_of(sub, (1, 1)) == (1, 3):
            sub = cfg.reflected()
            flipped = True
    if _partner_of(sub, (2, 1)) != (2, 3):
        ctx, label = _h78_c3_singleton_frame(sub)
    else:
        ctx, label = _h78_c3_singleton_direct(sub)
    return ctx, label


def _partner_of(cfg: TerminalConfig, v: Vertex) -> Vertex | None:
    for a, b in cfg.pairs:
        if a == v:
            return b
        if b == v:
            return a
    return None


def _h78_c3_singleton_frame(cfg: TerminalConfig):
    label = "L2/c/no-pair-center-singleton"
    ctx = RoutingContext.fresh(cfg)
    p_11 = next(i for i, p in enumerate(cfg.pairs) if (1, 1) in p)
    p_12 = next(i for i, p in enumerate(cfg.pairs) if (1, 2) in p)
    cyc = CYCLE_6_NO_COL1
    frame = FrameSpec(
        cycle=cyc, anchor=(1, 2), attach=(_walk((1, 1), (1, 2)), Path(((1, 2),)))
    )
    mates = []
    for pi in (p_11, p_12):
        t_v = [x for x in cfg.pairs[pi] if x not in INNER_SQUARE][0]
        if t_v in cyc:
            mates.append(Path((t_v,)))
        elif t_v == (3, 1):
            mates.append(_walk((3, 1), (3, 2)))
        else:
            raise CaseGap(f"{label}: mate {t_v} off the cycle")
    trail1, trail2 = complete_frame(ctx, frame, mates[0], mates[1])
    ctx.finish_link(p_11, trail1)
    ctx.finish_link(p_12, trail2)
    # escapes: the (2,1) member exits at (3,1), the singleton at (2,3)
    m21_tid = _tid_at(ctx, (2, 1))
    t21 = ctx.positions.get(partner(m21_tid))
    esc = _walk((2, 1), (3, 1))
    if t21 == (3, 1):
        core = esc
        ctx.finish_link(m21_tid[1], core)
    else:
        if not set(esc.edges()) <= ctx.free:
            raise CaseGap(f"{label}: lane to the row corner blocked")
        ctx.move(m21_tid, esc)
        ctx.finish_escape(m21_tid)
    s0_tid = _tid_at(ctx, (2, 2))
    esc0 = _walk((2, 2), (2, 3))
    if not set(esc0.edges()) <= ctx.free or not ctx.is_free_vertex((2, 3)):
        raise CaseGap(f"{label}: stub exit blocked for the singleton")
    ctx.move(s0_tid, esc0)
    ctx.finish_escape(s0_tid)
    _finish(ctx, label=label)
    return ctx, label


def _h78_c3_singleton_direct(cfg: TerminalConfig):
    label = "L2/c/no-pair-center-singleton-direct"
    ctx = RoutingContext.fresh(cfg)
    p_12 = next(i for i, p in enumerate(cfg.pairs) if (1, 2) in p)
    p_21 = next(i for i, p in enumerate(cfg.pairs) if (2, 1) in p)
    if _partner_of(cfg, (1, 2)) != (3, 2) or _partner_of(cfg, (2, 1)) != (2, 3):
        raise CaseGap(f"{label}: direct pattern precondition failed")
    _link_with_walk(ctx, p_12, ((1, 2), (2, 2), (3, 2)))
    _link_with_walk(ctx, p_21, ((2, 1), (3, 1), (3, 2), (3, 3), (2, 3)))
    m11_tid = _tid_at(ctx, (1, 1))
    ctx.move(m11_tid, _walk((1, 1), (1, 2), (1, 3)))
    ctx.finish_escape(m11_tid)
    s0_tid = _tid_at(ctx, (2, 2))
    ctx.move(s0_tid, _walk((2, 2), (2, 3)))
    ctx.finish_escape(s0_tid)
    _finish(ctx, label=label)
    return ctx, label


# ---------------------------------------------------------------------------
# Dispatch, validation, fallback.
# ---------------------------------------------------------------------------


def _route(cfg: TerminalConfig, lemma: LemmaId, case_fn):
    contract = contract_for(lemma)
    ctx, label = case_fn(cfg)
    plan = ctx.plan()
    labels = (label, *ctx.notes)
    verdict = validate_plan(ctx.grid, ctx.cfg, plan, contract)
    if not verdict.ok:
        raise CaseGap(f"{label}: plan invalid: {verdict.violations[0].message}")
    if ctx.cfg != cfg:
        # the handler solved the diagonal reflection; carry the plan back
        plan = reflected_plan(ctx.cfg, plan)
        verdict = validate_plan(full_grid(), cfg, plan, contract)
        if not verdict.ok:
            raise CaseGap(f"{label}: reflected plan invalid")
        return plan, CaseTrace(lemma, labels, symmetry_applied=True)
    return plan, CaseTrace(lemma, labels)


def _route_with_fallback(cfg, lemma, case_fn, strict):
    try:
        return _route(cfg, lemma, case_fn)
    except (CaseGap, ToolkitError) as exc:
        if strict:
            raise CaseGap(f"{lemma.value}: {exc}") from exc
        plan = oracle_solve(full_grid(), cfg, contract_for(lemma), SearchBudget())
        if plan is None:
            raise RouterError(f"no plan exists for {cfg}") from exc
        return plan, CaseTrace(lemma, ("fallback",), used_fallback=True)


def route(cfg: TerminalConfig, strict: bool = False) -> tuple[EscapePlan, CaseTrace]:
    family = family_of(cfg)
    if family is LemmaId.HEAVY78:
        return _route_with_fallback(cfg, family, _heavy78_case, strict)
    if family is LemmaId.HEAVY6:
        return _route_with_fallback(cfg, family, _heavy6_case, strict)
    if family is LemmaId.HEAVY5:
        return _route_with_fallback(cfg, family, _heavy5_case, strict)
    if len(cfg.pairs) == 3 and not cfg.singletons:
        raise UnsupportedFamily(
            "six terminals in three pairs: demote a pair to singletons first"
        )
    raise UnsupportedFamily(f"unsupported terminal family: {cfg}")
