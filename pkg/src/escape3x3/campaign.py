"""Verification campaigns over complete enumerations.

A campaign routes every configuration of a family, validates the plan with
both validator implementations, and cross-checks existence against the
exhaustive oracle.  Reports are reproducible: identical inputs give
identical reports apart from the wall time.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .grid import full_grid, grid_without_corner
from .model import contract_for, validate_plan, validate_plan_recheck
from .oracle import check_weakly_2_linked, oracle_solve
from .router import CASE_LABELS, CaseGap, route
from .terminals import LemmaId, encode_config, enumerate_configs

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_ORACLE_DISAGREEMENT = 3
EXIT_CASE_GAP = 4


@dataclass
class CampaignReport:
    lemma: str
    total: int = 0
    valid: int = 0
    fallbacks: int = 0
    case_histogram: dict[str, int] = field(default_factory=dict)
    failures: list = field(default_factory=list)
    oracle_disagreements: int = 0
    case_gaps: int = 0
    dead_labels: list[str] = field(default_factory=list)
    wall_time: float = 0.0

    def exit_status(self) -> int:
        if self.case_gaps:
            return EXIT_CASE_GAP
        if self.oracle_disagreements:
            return EXIT_ORACLE_DISAGREEMENT
        if self.failures or self.valid != self.total:
            return EXIT_VALIDATION
        return EXIT_OK

    def to_json(self) -> dict:
        return {
            "lemma": self.lemma,
            "total": self.total,
            "valid": self.valid,
            "fallbacks": self.fallbacks,
            "case_histogram": dict(sorted(self.case_histogram.items())),
            "failures": self.failures,
            "oracle_disagreements": self.oracle_disagreements,
            "case_gaps": self.case_gaps,
            "dead_labels": sorted(self.dead_labels),
            "wall_time": self.wall_time,
        }


def _verify_one(args):
    lemma_value, strict, index, cfg_json = args
    from .terminals import decode_config

    lemma = LemmaId(lemma_value)
    cfg = decode_config(cfg_json)
    contract = contract_for(lemma)
    grid = full_grid()
    record = {
        "index": index,
        "config": cfg_json,
        "label": None,
        "fallback": False,
        "violations": [],
        "oracle_ok": True,
        "case_gap": False,
    }
    try:
        plan, trace = route(cfg, strict=strict)
        record["label"] = trace.case_labels[0]
        record["fallback"] = trace.used_fallback
        v1 = validate_plan(grid, cfg, plan, contract)
        v2 = validate_plan_recheck(grid, cfg, plan, contract)
        if v1.ok != v2.ok:
            record["violations"].append("VALIDATOR_DISAGREEMENT")
        if not v1.ok:
            record["violations"].extend(
                f"{viol.code.value}: {viol.message}" for viol in v1.violations
            )
    except CaseGap as exc:
        record["case_gap"] = True
        record["violations"].append(f"CASE_GAP: {exc}")
    except Exception as exc:  # noqa: BLE001 - campaign reports, never raises
        record["violations"].append(f"ERROR: {exc!r}")
    if oracle_solve(grid, cfg, contract) is None:
        record["oracle_ok"] = False
    return record


def verify_all(lemma: LemmaId, strict: bool = False, jobs: int = 1) -> CampaignReport:
    """Route, validate, and oracle-check every configuration of a family."""
    if lemma is LemmaId.W2L:
        return verify_weak_linkage()
    started = time.perf_counter()
    report = CampaignReport(lemma=lemma.value)
    tasks = [
        (lemma.value, strict, i, encode_config(cfg))
        for i, cfg in enumerate(enumerate_configs(lemma))
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_verify_one, tasks, chunksize=64))
    else:
        records = [_verify_one(t) for t in tasks]
    records.sort(key=lambda r: r["index"])
    for rec in records:
        report.total += 1
        problems = list(rec["violations"])
        if not rec["oracle_ok"]:
            report.oracle_disagreements += 1
            problems.append("ORACLE_NONE")
        if rec["case_gap"]:
            report.case_gaps += 1
        if rec["fallback"]:
            report.fallbacks += 1
        if rec["label"]:
            report.case_histogram[rec["label"]] = (
                report.case_histogram.get(rec["label"], 0) + 1
            )
        if problems:
            report.failures.append({"config": rec["config"], "problems": problems})
        else:
            report.valid += 1
    report.dead_labels = sorted(CASE_LABELS[lemma] - set(report.case_histogram))
    report.wall_time = time.perf_counter() - started
    return report


def verify_weak_linkage() -> CampaignReport:
    """Exhaustive weak 2-linkage check on the corner grid and the grid
    without its far corner."""
    started = time.perf_counter()
    report = CampaignReport(lemma=LemmaId.W2L.value)
    for name, grid in (("corner-grid", full_grid()), ("without-corner", grid_without_corner())):
        tuples = len(grid.vertices) ** 4
        ok, witness = check_weakly_2_linked(grid)
        report.total += tuples
        if ok:
            report.valid += tuples
            report.case_histogram[name] = tuples
        else:
            report.failures.append({"graph": name, "counterexample": list(witness)})
    report.wall_time = time.perf_counter() - started
    return report


def report_to_text(report: CampaignReport) -> str:
    lines = [
        f"lemma={report.lemma} total={report.total} valid={report.valid} "
        f"fallbacks={report.fallbacks} case_gaps={report.case_gaps} "
        f"oracle_disagreements={report.oracle_disagreements}",
    ]
    for label in sorted(report.case_histogram):
        lines.append(f"  {label}: {report.case_histogram[label]}")
    if report.dead_labels:
        lines.append(f"  dead labels: {', '.join(report.dead_labels)}")
    for failure in report.failures[:20]:
        lines.append(f"  FAIL {json.dumps(failure, sort_keys=True)}")
    if len(report.failures) > 20:
        lines.append(f"  ... and {len(report.failures) - 20} more failures")
    lines.append(f"  wall_time={report.wall_time:.2f}s")
    return "\n".join(lines)
