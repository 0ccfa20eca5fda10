from escape3x3.model import EscapePlan, path_of
from escape3x3.render import render_ascii, render_dot
from escape3x3.router import route
from escape3x3.terminals import LemmaId, enumerate_configs, make_config


def test_empty_plan_renders_bare_grid():
    plan = EscapePlan.build({}, [])
    text = render_ascii(plan)
    assert "o" in text
    assert "*" not in text
    assert "1" not in text


def test_single_zero_length_escape_marks_exit():
    plan = EscapePlan.build({}, [((3, 1), (3, 1), path_of((3, 1)))])
    text = render_ascii(plan)
    assert "o*" in text


def test_terminals_drawn_as_squares():
    cfg = make_config([((1, 1), (1, 2))], [(3, 1), (3, 2), (1, 3)])
    plan, _ = route(cfg)
    text = render_ascii(plan, cfg)
    assert text.count("■") >= 5


def test_campaign_witnesses_render_without_collision():
    for cfg in list(enumerate_configs(LemmaId.HEAVY6))[::411]:
        plan, _ = route(cfg, strict=True)
        text = render_ascii(plan, cfg)  # raises on any double-claimed edge
        assert text


def test_render_deterministic():
    cfg = make_config([((1, 1), (2, 2))], [(1, 2), (2, 1), (1, 3)])
    plan, _ = route(cfg)
    assert render_ascii(plan, cfg) == render_ascii(plan, cfg)


def test_dot_output_shape():
    cfg = make_config([((1, 1), (2, 2))], [(1, 2), (2, 1), (1, 3)])
    plan, _ = route(cfg)
    dot = render_dot(plan, cfg)
    assert dot.startswith("graph escape {")
    assert dot.rstrip().endswith("}")
    assert '"1,1" -- "1,2"' in dot
