"""Paths, escape plans, per-family contracts, and plan validation.

Paths are edge-simple trails: consecutive vertices are grid-adjacent, no
edge is traversed twice, but vertices may repeat (assembled routes may cross
at a vertex).  A zero-length path is a single vertex.

Validation is implemented twice, in different styles, and the two verdicts
are compared over every campaign plan.
"""

from __future__ import annotations

import enum
import json
from collections import Counter
from dataclasses import dataclass

from .grid import (
    BOUNDARY,
    COL_ONLY,
    Edge,
    GridGraph,
    Vertex,
    adjacent,
    edge,
    edges_of_walk,
    reflect_vertex,
)
from .terminals import LemmaId, TerminalConfig


class PathError(ValueError):
    """Raised when a vertex sequence is not an edge-simple grid trail."""


@dataclass(frozen=True, order=True)
class Path:
    vertices: tuple[Vertex, ...]

    def __post_init__(self):
        if not self.vertices:
            raise PathError("a path needs at least one vertex")
        seen: set[Edge] = set()
        for a, b in zip(self.vertices, self.vertices[1:]):
            if not adjacent(a, b):
                raise PathError(f"{a} -> {b} is not a grid step")
            e = edge(a, b)
            if e in seen:
                raise PathError(f"edge {e} traversed twice")
            seen.add(e)

    @property
    def start(self) -> Vertex:
        return self.vertices[0]

    @property
    def end(self) -> Vertex:
        return self.vertices[-1]

    def edges(self) -> list[Edge]:
        return edges_of_walk(self.vertices)

    def is_zero_length(self) -> bool:
        return len(self.vertices) == 1

    def reversed(self) -> "Path":
        return Path(tuple(reversed(self.vertices)))

    def reflected(self) -> "Path":
        return Path(tuple(reflect_vertex(v) for v in self.vertices))

    def __add__(self, other: "Path") -> "Path":
        if self.end != other.start:
            raise PathError(f"cannot join {self.end} to {other.start}")
        return Path(self.vertices + other.vertices[1:])


def path_of(*vertices: Vertex) -> Path:
    return Path(tuple(vertices))


@dataclass(frozen=True)
class EscapeContract:
    """Obligations a plan must meet for one escape family."""

    min_linked_pairs: int
    exit_target: frozenset[Vertex]
    max_exits_in_restricted: int | None  # None means unbounded
    restricted_zone: frozenset[Vertex] = COL_ONLY


def contract_for(lemma: LemmaId) -> EscapeContract:
    if lemma is LemmaId.HEAVY78:
        return EscapeContract(2, BOUNDARY, None)
    if lemma is LemmaId.HEAVY6:
        return EscapeContract(1, BOUNDARY, 1)
    if lemma is LemmaId.HEAVY5:
        return EscapeContract(1, BOUNDARY, 1)
    raise ValueError(f"{lemma} has no escape contract")


class Code(str, enum.Enum):
    EDGE_REUSE = "EDGE_REUSE"
    EXIT_COLLISION = "EXIT_COLLISION"
    B_EXIT_BOUND = "B_EXIT_BOUND"
    BAD_ENDPOINT = "BAD_ENDPOINT"
    NOT_A_PATH = "NOT_A_PATH"
    UNRESOLVED_TERMINAL = "UNRESOLVED_TERMINAL"
    LINK_COUNT = "LINK_COUNT"


@dataclass(frozen=True)
class Violation:
    code: Code
    message: str
    subject: object = None


@dataclass(frozen=True)
class Verdict:
    ok: bool
    violations: tuple[Violation, ...] = ()

    @staticmethod
    def from_violations(violations) -> "Verdict":
        vs = tuple(violations)
        return Verdict(ok=not vs, violations=vs)


@dataclass(frozen=True)
class EscapePlan:
    linkages: tuple[tuple[int, Path], ...]  # (pair index, trail), sorted by index
    escapes: tuple[tuple[Vertex, Vertex, Path], ...]  # (terminal, exit, trail)

    @staticmethod
    def build(linkages: dict[int, Path], escapes) -> "EscapePlan":
        return EscapePlan(
            linkages=tuple(sorted(linkages.items())),
            escapes=tuple(sorted(escapes)),
        )

    def linkage_map(self) -> dict[int, Path]:
        return dict(self.linkages)

    def reflected(self) -> "EscapePlan":
        return EscapePlan(
            linkages=tuple((i, p.reflected()) for i, p in self.linkages),
            escapes=tuple(
                sorted(
                    (reflect_vertex(t), reflect_vertex(x), p.reflected())
                    for t, x, p in self.escapes
                )
            ),
        )

    def all_paths(self) -> list[Path]:
        return [p for _, p in self.linkages] + [p for _, _, p in self.escapes]


def plan_to_json(plan: EscapePlan) -> dict:
    return {
        "linkages": [
            {"pair": i, "path": [list(v) for v in p.vertices]} for i, p in plan.linkages
        ],
        "escapes": [
            {
                "terminal": list(t),
                "exit": list(x),
                "path": [list(v) for v in p.vertices],
            }
            for t, x, p in plan.escapes
        ],
    }


def plan_from_json(obj) -> EscapePlan:
    if isinstance(obj, str):
        obj = json.loads(obj)
    linkages = {
        rec["pair"]: Path(tuple(tuple(v) for v in rec["path"]))
        for rec in obj.get("linkages", [])
    }
    escapes = [
        (
            tuple(rec["terminal"]),
            tuple(rec["exit"]),
            Path(tuple(tuple(v) for v in rec["path"])),
        )
        for rec in obj.get("escapes", [])
    ]
    return EscapePlan.build(linkages, escapes)


def validate_plan(
    g: GridGraph, cfg: TerminalConfig, plan: EscapePlan, contract: EscapeContract
) -> Verdict:
    """Primary validator: walks the plan once, accumulating violations."""
    violations: list[Violation] = []
    linkmap = plan.linkage_map()

    if len(linkmap) < contract.min_linked_pairs:
        violations.append(
            Violation(
                Code.LINK_COUNT,
                f"{len(linkmap)} linked pairs, contract requires "
                f">= {contract.min_linked_pairs}",
                len(linkmap),
            )
        )

    linked_terminals: set[Vertex] = set()
    for i, path in sorted(linkmap.items()):
        if not 0 <= i < len(cfg.pairs):
            violations.append(
                Violation(Code.BAD_ENDPOINT, f"linkage references pair {i}", i)
            )
            continue
        pair = set(cfg.pairs[i])
        if {path.start, path.end} != pair:
            violations.append(
                Violation(
                    Code.BAD_ENDPOINT,
                    f"linkage {i} joins {path.start}-{path.end}, pair is {sorted(pair)}",
                    i,
                )
            )
        linked_terminals |= pair

    all_terminals = set(cfg.terminals)
    escaping = [t for t, _, _ in plan.escapes]
    escape_set = set(escaping)
    if len(escaping) != len(escape_set):
        dup = sorted(t for t, n in Counter(escaping).items() if n > 1)
        violations.append(
            Violation(Code.UNRESOLVED_TERMINAL, f"terminal escapes twice: {dup}", dup)
        )
    unresolved = all_terminals - linked_terminals - escape_set
    if unresolved:
        violations.append(
            Violation(
                Code.UNRESOLVED_TERMINAL,
                f"terminals neither linked nor escaped: {sorted(unresolved)}",
                sorted(unresolved),
            )
        )
    stray = escape_set - (all_terminals - linked_terminals)
    if stray:
        violations.append(
            Violation(
                Code.UNRESOLVED_TERMINAL,
                f"escape entries for non-escaping vertices: {sorted(stray)}",
                sorted(stray),
            )
        )

    exits = [x for _, x, _ in plan.escapes]
    collisions = sorted(x for x, n in Counter(exits).items() if n > 1)
    if collisions:
        violations.append(
            Violation(Code.EXIT_COLLISION, f"exit used twice: {collisions}", collisions)
        )
    for t, x, path in plan.escapes:
        if x not in contract.exit_target:
            violations.append(
                Violation(Code.BAD_ENDPOINT, f"exit {x} outside the boundary", x)
            )
        if path.start != t or path.end != x:
            violations.append(
                Violation(
                    Code.BAD_ENDPOINT,
                    f"escape path runs {path.start}->{path.end}, expected {t}->{x}",
                    t,
                )
            )

    if contract.max_exits_in_restricted is not None:
        in_zone = sorted(x for x in exits if x in contract.restricted_zone)
        if len(in_zone) > contract.max_exits_in_restricted:
            violations.append(
                Violation(
                    Code.B_EXIT_BOUND,
                    f"{len(in_zone)} exits in {sorted(contract.restricted_zone)}, "
                    f"allowed {contract.max_exits_in_restricted}",
                    in_zone,
                )
            )

    used: set[Edge] = set()
    for path in plan.all_paths():
        for e in path.edges():
            if e not in g.edges:
                violations.append(
                    Violation(Code.NOT_A_PATH, f"edge {e} is not in the graph", e)
                )
            if e in used:
                violations.append(
                    Violation(Code.EDGE_REUSE, f"edge {e} used by two paths", e)
                )
            used.add(e)

    return Verdict.from_violations(violations)


def validate_plan_recheck(
    g: GridGraph, cfg: TerminalConfig, plan: EscapePlan, contract: EscapeContract
) -> Verdict:
    """Independent re-check: multiset the traversed edges, then test every
    clause with separate passes.  Returns only the overall verdict shape;
    messages are not meant to match the primary validator."""
    bad: list[Violation] = []

    # Clause: global edge multiset must be a set, and a subset of g's edges.
    multiset: Counter = Counter()
    for path in plan.all_paths():
        vs = path.vertices
        for k in range(len(vs) - 1):
            a, b = vs[k], vs[k + 1]
            if abs(a[0] - b[0]) + abs(a[1] - b[1]) != 1:
                bad.append(Violation(Code.NOT_A_PATH, f"non-step {a}->{b}"))
                continue
            multiset[edge(a, b)] += 1
    for e, n in sorted(multiset.items()):
        if n > 1:
            bad.append(Violation(Code.EDGE_REUSE, f"{e} x{n}"))
        if e not in g.edges:
            bad.append(Violation(Code.NOT_A_PATH, f"{e} absent"))

    # Clause: linkage count and endpoints.
    linkmap = plan.linkage_map()
    if len(linkmap) < contract.min_linked_pairs:
        bad.append(Violation(Code.LINK_COUNT, "too few linkages"))
    for i in sorted(linkmap):
        p = linkmap[i]
        if i < 0 or i >= len(cfg.pairs) or {p.start, p.end} != set(cfg.pairs[i]):
            bad.append(Violation(Code.BAD_ENDPOINT, f"linkage {i}"))

    # Clause: every terminal resolved exactly once.
    resolved: Counter = Counter()
    for i in linkmap:
        if 0 <= i < len(cfg.pairs):
            resolved[cfg.pairs[i][0]] += 1
            resolved[cfg.pairs[i][1]] += 1
    for t, _, _ in plan.escapes:
        resolved[t] += 1
    for t in cfg.terminals:
        if resolved[t] != 1:
            bad.append(Violation(Code.UNRESOLVED_TERMINAL, f"{t} resolved x{resolved[t]}"))
    for t in resolved:
        if t not in set(cfg.terminals):
            bad.append(Violation(Code.UNRESOLVED_TERMINAL, f"{t} is not a terminal"))

    # Clause: exits.
    exits = [x for _, x, _ in plan.escapes]
    if len(set(exits)) != len(exits):
        bad.append(Violation(Code.EXIT_COLLISION, "exit collision"))
    for t, x, p in plan.escapes:
        if x not in contract.exit_target or p.start != t or p.end != x:
            bad.append(Violation(Code.BAD_ENDPOINT, f"escape {t}->{x}"))
    if contract.max_exits_in_restricted is not None:
        count = sum(1 for x in exits if x in contract.restricted_zone)
        if count > contract.max_exits_in_restricted:
            bad.append(Violation(Code.B_EXIT_BOUND, f"{count} restricted exits"))

    return Verdict.from_violations(bad)


def reflected_plan(cfg, plan: EscapePlan) -> EscapePlan:
    """Reflect a plan across the diagonal, re-keying pair indices to the
    canonical ordering of the reflected configuration."""
    reflected = plan.reflected()
    target = cfg.reflected()
    index_map = {}
    for i, (a, b) in enumerate(cfg.pairs):
        image = tuple(sorted((reflect_vertex(a), reflect_vertex(b))))
        index_map[i] = target.pairs.index(image)
    return EscapePlan.build(
        {index_map[i]: p for i, p in reflected.linkages}, reflected.escapes
    )


def reflected_contract(contract: EscapeContract) -> EscapeContract:
    """The contract a reflected plan satisfies: the restricted zone flips
    from the last-column stub to the last-row stub."""
    zone = contract.restricted_zone
    flipped = frozenset(reflect_vertex(v) for v in zone)
    return EscapeContract(
        min_linked_pairs=contract.min_linked_pairs,
        exit_target=frozenset(reflect_vertex(v) for v in contract.exit_target),
        max_exits_in_restricted=contract.max_exits_in_restricted,
        restricted_zone=flipped,
    )
