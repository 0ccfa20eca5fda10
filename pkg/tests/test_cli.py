import json

from escape3x3.cli import main


def _write_cfg(tmp_path, payload):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def test_solve_prints_plan_and_renders(tmp_path, capsys):
    path = _write_cfg(
        tmp_path,
        {"pairs": [[[1, 1], [2, 2]]], "singletons": [[1, 2], [2, 1], [1, 3]]},
    )
    status = main(["solve", "--config", path, "--render", "ascii"])
    out = capsys.readouterr().out
    assert status == 0
    payload = json.loads(out[: out.index("\n■")] if "■" in out else out)
    assert len(payload["plan"]["escapes"]) == 3
    assert len(payload["plan"]["linkages"]) == 1
    assert payload["trace"]["used_fallback"] is False


def test_solve_fixture_trace_names_lemma_and_clip_family(tmp_path, capsys):
    cfg = {"pairs": [[[1, 2], [2, 1]], [[2, 2], [2, 3]]], "singletons": [[1, 1], [1, 3]]}
    status = main(["solve", "--config", _write_cfg(tmp_path, cfg)])
    out = capsys.readouterr().out
    assert status == 0
    payload = json.loads(out)
    assert payload["trace"]["case_labels"][0].startswith("L3/")


def test_solve_rejects_malformed(tmp_path, capsys):
    path = _write_cfg(tmp_path, {"pairs": [[[1, 1], [1, 1]]], "singletons": []})
    status = main(["solve", "--config", path])
    assert status == 2
    assert "malformed" in capsys.readouterr().err


def test_solve_rejects_unsupported_family(tmp_path, capsys):
    cfg = {
        "pairs": [[[1, 1], [2, 2]], [[1, 2], [2, 1]], [[1, 3], [3, 1]]],
        "singletons": [],
    }
    status = main(["solve", "--config", _write_cfg(tmp_path, cfg)])
    assert status == 2
    assert "demote" in capsys.readouterr().err


def test_solve_render_dot(tmp_path, capsys):
    path = _write_cfg(
        tmp_path,
        {"pairs": [[[1, 1], [2, 2]]], "singletons": [[1, 2], [2, 1], [1, 3]]},
    )
    status = main(["solve", "--config", path, "--render", "dot"])
    out = capsys.readouterr().out
    assert status == 0
    assert "graph escape {" in out


def test_enumerate_writes_ndjson(tmp_path, capsys):
    out_path = tmp_path / "heavy5.ndjson"
    status = main(["enumerate", "--lemma", "heavy5", "--out", str(out_path)])
    assert status == 0
    lines = out_path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 1260
    assert all(json.loads(line) for line in lines)


def test_clips_verify(capsys):
    status = main(["clips", "--verify"])
    out = capsys.readouterr().out
    assert status == 0
    assert "FAIL" not in out


def test_verify_heavy5_strict_report(tmp_path, capsys):
    report_path = tmp_path / "report.json"
    status = main(
        ["verify", "--lemma", "heavy5", "--strict", "--report", str(report_path)]
    )
    assert status == 0
    report = json.loads(report_path.read_text(encoding="utf-8"))
    assert report["total"] == 1260
    assert report["valid"] == 1260
    assert report["fallbacks"] == 0
    assert report["dead_labels"] == []


def test_verify_w2l(capsys):
    status = main(["verify", "--lemma", "w2l"])
    out = capsys.readouterr().out
    assert status == 0
    assert "total=10657" in out
