"""Pure-Python twin of the edge-disjoint trail packing kernel.

Given a small graph (adjacency lists over vertex indices, edges numbered
into a bitmask) and a sequence of (start, end) endpoint pairs, finds the
lexicographically first system of pairwise edge-disjoint trails connecting
every pair, by depth-first search.  Trails may revisit vertices but never
reuse an edge; a zero-length trail is allowed when start == end.

The compiled twin in _kernel_cy.pyx mirrors this enumeration order and the
node-counting exactly; both backends must return identical results.
"""

from __future__ import annotations

FOUND = 1
NONE = 0
BUDGET = -1


def find_trail_system(adj, pairs, mask, max_nodes=0):
    """Search for edge-disjoint trails joining every endpoint pair.

    adj: tuple of per-vertex tuples ((neighbor, edge_id), ...) sorted by
         neighbor index; pairs: tuple of (a, b) vertex indices; mask: bitmask
         of free edge ids; max_nodes: 0 for unlimited.

    Returns (status, trails, nodes) where trails is a tuple of vertex-index
    tuples when status == FOUND.
    """
    k = len(pairs)
    trails: list = [None] * k
    state = [0, False]  # nodes, exhausted

    def reach(m: int, src: int) -> int:
        seen = 1 << src
        stack = [src]
        while stack:
            u = stack.pop()
            for w, eid in adj[u]:
                if (m >> eid) & 1 and not (seen >> w) & 1:
                    seen |= 1 << w
                    stack.append(w)
        return seen

    def later_pairs_connected(m: int, i: int) -> bool:
        for j in range(i, k):
            a, b = pairs[j]
            if a != b and not (reach(m, a) >> b) & 1:
                return False
        return True

    def extend(i: int, m: int, path: list, cur: int) -> bool:
        if max_nodes and state[0] >= max_nodes:
            state[1] = True
            return False
        state[0] += 1
        b = pairs[i][1]
        if cur == b:
            trails[i] = tuple(path)
            if i + 1 == k:
                return True
            if later_pairs_connected(m, i + 1) and extend(
                i + 1, m, [pairs[i + 1][0]], pairs[i + 1][0]
            ):
                return True
            trails[i] = None
            if state[1]:
                return False
        if not (reach(m, cur) >> b) & 1:
            return False
        for w, eid in adj[cur]:
            if (m >> eid) & 1:
                path.append(w)
                if extend(i, m & ~(1 << eid), path, w):
                    return True
                path.pop()
                if state[1]:
                    return False
        return False

    if k == 0:
        return FOUND, (), 0
    ok = extend(0, mask, [pairs[0][0]], pairs[0][0])
    if ok:
        return FOUND, tuple(trails), state[0]
    return (BUDGET if state[1] else NONE), None, state[0]
