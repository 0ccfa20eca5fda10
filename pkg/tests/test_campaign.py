import json

from escape3x3.campaign import (
    EXIT_CASE_GAP,
    EXIT_OK,
    EXIT_ORACLE_DISAGREEMENT,
    EXIT_VALIDATION,
    CampaignReport,
    verify_all,
)
from escape3x3.terminals import LemmaId


def test_report_invariant_valid_plus_failures_is_total():
    report = verify_all(LemmaId.HEAVY5, strict=True)
    assert report.valid + len(report.failures) == report.total
    assert report.exit_status() == EXIT_OK


def test_parallel_report_matches_sequential():
    seq = verify_all(LemmaId.HEAVY5, strict=True).to_json()
    par = verify_all(LemmaId.HEAVY5, strict=True, jobs=3).to_json()
    seq.pop("wall_time")
    par.pop("wall_time")
    assert json.dumps(seq, sort_keys=True) == json.dumps(par, sort_keys=True)


def test_exit_status_priorities():
    report = CampaignReport(lemma="heavy5", total=1, valid=0)
    report.failures.append({"config": {}, "problems": ["x"]})
    assert report.exit_status() == EXIT_VALIDATION
    report.oracle_disagreements = 1
    assert report.exit_status() == EXIT_ORACLE_DISAGREEMENT
    report.case_gaps = 1
    assert report.exit_status() == EXIT_CASE_GAP


def test_report_json_shape():
    report = verify_all(LemmaId.W2L)
    payload = report.to_json()
    assert payload["lemma"] == "w2l"
    assert payload["total"] == 6561 + 4096
    assert payload["valid"] == payload["total"]
