import pytest

from escape3x3.grid import BOUNDARY, COL_ONLY, ROW_ONLY, full_grid
from escape3x3.model import (
    Code,
    EscapePlan,
    Path,
    PathError,
    contract_for,
    path_of,
    plan_from_json,
    plan_to_json,
    reflected_contract,
    reflected_plan,
    validate_plan,
    validate_plan_recheck,
)
from escape3x3.terminals import LemmaId, make_config


def test_path_requires_grid_steps():
    with pytest.raises(PathError):
        path_of((1, 1), (2, 2))


def test_path_rejects_edge_reuse():
    with pytest.raises(PathError):
        path_of((1, 1), (1, 2), (1, 1), (1, 2))


def test_path_allows_vertex_revisit():
    p = path_of((1, 2), (1, 1), (2, 1), (2, 2), (1, 2), (1, 3))
    assert p.start == (1, 2) and p.end == (1, 3)


def test_zero_length_path():
    p = path_of((2, 3))
    assert p.is_zero_length()
    assert p.edges() == []


def test_contracts():
    c78 = contract_for(LemmaId.HEAVY78)
    assert c78.min_linked_pairs == 2
    assert c78.max_exits_in_restricted is None
    c6 = contract_for(LemmaId.HEAVY6)
    assert c6.min_linked_pairs == 1
    assert c6.max_exits_in_restricted == 1
    c5 = contract_for(LemmaId.HEAVY5)
    assert c5.min_linked_pairs == 1
    assert c5.max_exits_in_restricted == 1
    with pytest.raises(ValueError):
        contract_for(LemmaId.W2L)


def _sample_heavy5():
    # pair linked on a single edge, three in-place escapes
    cfg = make_config([((1, 1), (1, 2))], [(3, 1), (3, 2), (1, 3)])
    plan = EscapePlan.build(
        {0: path_of((1, 1), (1, 2))},
        [
            ((3, 1), (3, 1), path_of((3, 1))),
            ((3, 2), (3, 2), path_of((3, 2))),
            ((1, 3), (1, 3), path_of((1, 3))),
        ],
    )
    return cfg, plan


def test_validate_accepts_trivial_plan(grid):
    cfg, plan = _sample_heavy5()
    verdict = validate_plan(grid, cfg, plan, contract_for(LemmaId.HEAVY5))
    assert verdict.ok
    assert validate_plan_recheck(grid, cfg, plan, contract_for(LemmaId.HEAVY5)).ok


def test_validate_detects_edge_reuse(grid):
    cfg = make_config(
        [((3, 1), (3, 3)), ((2, 3), (3, 2))], [(1, 1), (1, 2)]
    )
    shared = path_of((3, 2), (3, 3))
    plan = EscapePlan.build(
        {0: path_of((3, 1), (3, 2), (3, 3))},
        [
            ((2, 3), (2, 3), path_of((2, 3))),
            ((3, 2), (3, 3), shared),
            ((1, 1), (3, 1), path_of((1, 1), (2, 1), (3, 1))),
            ((1, 2), (1, 3), path_of((1, 2), (1, 3))),
        ],
    )
    verdict = validate_plan(grid, cfg, plan, contract_for(LemmaId.HEAVY6))
    assert not verdict.ok
    assert any(v.code is Code.EDGE_REUSE for v in verdict.violations)


def test_validate_detects_col_bound(grid):
    cfg = make_config([((3, 1), (3, 2))], [(1, 3), (2, 3), (1, 1)])
    plan = EscapePlan.build(
        {0: path_of((3, 1), (3, 2))},
        [
            ((1, 3), (1, 3), path_of((1, 3))),
            ((2, 3), (2, 3), path_of((2, 3))),
            ((1, 1), (2, 1), path_of((1, 1), (2, 1))),
        ],
    )
    verdict = validate_plan(grid, cfg, plan, contract_for(LemmaId.HEAVY5))
    codes = {v.code for v in verdict.violations}
    assert Code.B_EXIT_BOUND in codes
    # (2,1) is not a boundary vertex either
    assert Code.BAD_ENDPOINT in codes


def test_validate_detects_exit_collision(grid):
    cfg = make_config([((3, 1), (3, 2))], [(1, 1), (2, 1), (1, 3)])
    plan = EscapePlan.build(
        {0: path_of((3, 1), (3, 2))},
        [
            ((1, 1), (3, 1), path_of((1, 1), (2, 1), (3, 1))),
            ((2, 1), (3, 1), path_of((2, 1), (2, 2), (3, 2), (3, 1))),
            ((1, 3), (1, 3), path_of((1, 3))),
        ],
    )
    verdict = validate_plan(grid, cfg, plan, contract_for(LemmaId.HEAVY5))
    assert any(v.code is Code.EXIT_COLLISION for v in verdict.violations)


def test_validate_detects_unresolved_and_link_count(grid):
    cfg = make_config([((1, 1), (2, 2)), ((3, 1), (3, 3))], [(1, 3), (2, 3)])
    plan = EscapePlan.build({0: path_of((1, 1), (1, 2), (2, 2))}, [])
    verdict = validate_plan(grid, cfg, plan, contract_for(LemmaId.HEAVY6))
    codes = {v.code for v in verdict.violations}
    assert Code.UNRESOLVED_TERMINAL in codes
    # one linkage satisfies the six-terminal contract, so no LINK_COUNT
    assert Code.LINK_COUNT not in codes
    verdict78 = validate_plan(grid, cfg, plan, contract_for(LemmaId.HEAVY78))
    assert any(v.code is Code.LINK_COUNT for v in verdict78.violations)


def test_validate_detects_missing_edge():
    g = full_grid()
    from escape3x3.grid import build_corner_grid

    deleted = build_corner_grid(frozenset({(2, 2)}))
    cfg = make_config([((1, 1), (1, 2))], [(3, 1), (3, 2), (1, 3)])
    plan = EscapePlan.build(
        {0: path_of((1, 1), (1, 2))},
        [
            ((3, 1), (3, 1), path_of((3, 1))),
            ((3, 2), (3, 3), path_of((3, 2), (2, 2), (2, 3), (3, 3))),
            ((1, 3), (1, 3), path_of((1, 3))),
        ],
    )
    assert validate_plan(g, cfg, plan, contract_for(LemmaId.HEAVY5)).ok
    verdict = validate_plan(deleted, cfg, plan, contract_for(LemmaId.HEAVY5))
    assert any(v.code is Code.NOT_A_PATH for v in verdict.violations)


def test_plan_json_round_trip():
    _, plan = _sample_heavy5()
    assert plan_from_json(plan_to_json(plan)) == plan


def test_validators_agree_on_bad_plans(grid):
    cfg, plan = _sample_heavy5()
    bad = EscapePlan.build({}, list(plan.escapes))
    v1 = validate_plan(grid, cfg, bad, contract_for(LemmaId.HEAVY5))
    v2 = validate_plan_recheck(grid, cfg, bad, contract_for(LemmaId.HEAVY5))
    assert v1.ok == v2.ok == False  # noqa: E712


def _h6_sample():
    from escape3x3.terminals import LemmaId as L
    from escape3x3.terminals import enumerate_configs

    return list(enumerate_configs(L.HEAVY6))[::173]


def test_validators_agree_on_corrupted_plans(grid):
    """Dropping any single escape from a valid plan must flip both verdicts."""
    from escape3x3.router import route

    contract = contract_for(LemmaId.HEAVY6)
    for cfg in _h6_sample():
        plan, _ = route(cfg, strict=True)
        for k in range(len(plan.escapes)):
            broken = EscapePlan(
                linkages=plan.linkages,
                escapes=plan.escapes[:k] + plan.escapes[k + 1 :],
            )
            v1 = validate_plan(grid, cfg, broken, contract)
            v2 = validate_plan_recheck(grid, cfg, broken, contract)
            assert not v1.ok and not v2.ok
            assert any(v.code is Code.UNRESOLVED_TERMINAL for v in v1.violations)


def test_validators_agree_on_duplicated_exits(grid):
    from escape3x3.router import route

    contract = contract_for(LemmaId.HEAVY6)
    for cfg in _h6_sample():
        plan, _ = route(cfg, strict=True)
        if len(plan.escapes) < 2:
            continue
        t0, x0, p0 = plan.escapes[0]
        t1, _, _ = plan.escapes[1]
        if t1 == x0:
            continue
        forged = (t1, x0, None)
        # reroute the second escape onto the first exit, if a path exists
        from escape3x3 import kernel

        used = set()
        for p in plan.all_paths():
            used.update(p.edges())
        free = set(grid.edges) - used
        trails, _, _ = kernel.solve_trails(grid, free, [(t1, x0)])
        if trails is None:
            continue
        escapes = (plan.escapes[0], (t1, x0, trails[0])) + plan.escapes[2:]
        broken = EscapePlan(linkages=plan.linkages, escapes=tuple(sorted(escapes)))
        v1 = validate_plan(grid, cfg, broken, contract)
        v2 = validate_plan_recheck(grid, cfg, broken, contract)
        assert not v1.ok and not v2.ok
        assert any(v.code is Code.EXIT_COLLISION for v in v1.violations)


def test_reflected_contract_swaps_zone():
    c = contract_for(LemmaId.HEAVY6)
    r = reflected_contract(c)
    assert c.restricted_zone == COL_ONLY
    assert r.restricted_zone == ROW_ONLY
    assert r.exit_target == frozenset(BOUNDARY)


def test_reflected_plan_is_valid_for_reflected_config(grid):
    cfg, plan = _sample_heavy5()
    rcfg = cfg.reflected()
    rplan = reflected_plan(cfg, plan)
    rcontract = reflected_contract(contract_for(LemmaId.HEAVY5))
    assert validate_plan(grid, rcfg, rplan, rcontract).ok
