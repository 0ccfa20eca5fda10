"""Kernel behavior, plus cross-checks between the two backends."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from escape3x3 import _kernel_py, kernel
from escape3x3.grid import build_corner_grid, full_grid

try:
    from escape3x3 import _kernel_cy
except ImportError:  # pragma: no cover - depends on the build
    _kernel_cy = None

BACKENDS = [_kernel_py] + ([_kernel_cy] if _kernel_cy else [])


def _desc(g):
    return kernel.desc_for(g)


def test_backend_reported():
    assert kernel.BACKEND in ("python", "cython")


def test_zero_length_pair(grid):
    paths, _, _ = kernel.solve_trails(grid, grid.edges, [((1, 1), (1, 1))])
    assert paths is not None
    assert paths[0].is_zero_length()


def test_no_pairs(grid):
    paths, nodes, exhausted = kernel.solve_trails(grid, grid.edges, [])
    assert paths == [] and nodes == 0 and not exhausted


def test_infeasible_returns_none():
    g = build_corner_grid(frozenset({(2, 2), (3, 3)}))
    # the surviving graph is a path; two edge-disjoint routes cannot exist
    paths, _, exhausted = kernel.solve_trails(
        g, g.edges, [((1, 3), (3, 1)), ((3, 1), (1, 3))]
    )
    assert paths is None and not exhausted


def test_budget_exhaustion(grid):
    paths, nodes, exhausted = kernel.solve_trails(
        grid, grid.edges, [((1, 1), (3, 3)), ((3, 3), (1, 1)), ((1, 3), (3, 1))], 3
    )
    assert paths is None and exhausted and nodes <= 3


def test_determinism(grid):
    pairs = [((1, 1), (3, 3)), ((1, 3), (3, 1))]
    first = kernel.solve_trails(grid, grid.edges, pairs)
    second = kernel.solve_trails(grid, grid.edges, pairs)
    assert first[0] == second[0]
    assert first[1] == second[1]


@pytest.mark.skipif(_kernel_cy is None, reason="compiled kernel unavailable")
def test_backends_identical_over_samples(grid):
    desc = _desc(grid)
    vertices = range(len(desc.vertices))
    mask = (1 << len(desc.edges)) - 1
    cases = list(itertools.product([0, 3, 4, 8], repeat=4))
    for a, b, c, d in cases:
        pairs = ((a, b), (c, d))
        r_py = _kernel_py.find_trail_system(desc.adj, pairs, mask, 0)
        r_cy = _kernel_cy.find_trail_system(desc.adj, pairs, mask, 0)
        assert r_py == r_cy


@pytest.mark.skipif(_kernel_cy is None, reason="compiled kernel unavailable")
@settings(max_examples=150, deadline=None)
@given(
    st.lists(st.integers(0, 8), min_size=2, max_size=6),
    st.integers(0, (1 << 12) - 1),
    st.integers(0, 400),
)
def test_backends_identical_random(endpoints, mask, budget):
    desc = _desc(full_grid())
    if len(endpoints) % 2:
        endpoints = endpoints[:-1]
    pairs = tuple(
        (endpoints[i], endpoints[i + 1]) for i in range(0, len(endpoints), 2)
    )
    r_py = _kernel_py.find_trail_system(desc.adj, pairs, mask, budget)
    r_cy = _kernel_cy.find_trail_system(desc.adj, pairs, mask, budget)
    assert r_py == r_cy


def test_trails_are_edge_disjoint(grid):
    paths, _, _ = kernel.solve_trails(
        grid, grid.edges, [((1, 1), (1, 3)), ((3, 1), (3, 3)), ((2, 1), (2, 3))]
    )
    assert paths is not None
    seen = set()
    for p in paths:
        for e in p.edges():
            assert e not in seen
            seen.add(e)
