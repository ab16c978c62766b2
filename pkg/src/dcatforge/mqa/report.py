from __future__ import annotations

import json

from .evaluate import IndicatorResult, QualityReport

PASS_MARK = "✓"
FAIL_MARK = "✗"


def render_human(report: QualityReport) -> str:
    lines = [f"Dataset: {report.dataset}", f"Rubric: {report.rubric}"]
    if report.evaluated_at:
        lines.append(f"Evaluated: {report.evaluated_at}")
    for dim in report.dimensions:
        lines.append("")
        lines.append(f"{dim.name} ({dim.points}/{dim.max})")
        for r in report.results:
            if r.dimension != dim.name:
                continue
            mark = PASS_MARK if r.passed else FAIL_MARK
            lines.append(f"  {mark} {r.indicator}: {r.awarded}/{r.max}")
            lines.extend(f"      {m}" for m in r.messages)
    lines.append("")
    lines.append(f"Total: {report.total} out of {report.max}")
    return "\n".join(lines) + "\n"


def report_to_dict(report: QualityReport) -> dict:
    return {
        "dataset": report.dataset,
        "rubric": report.rubric,
        "evaluated": report.evaluated_at,
        "total": report.total,
        "max": report.max,
        "dimensions": [{"name": d.name, "points": d.points, "max": d.max} for d in report.dimensions],
        "indicators": [
            {
                "id": r.indicator,
                "dimension": r.dimension,
                "awarded": r.awarded,
                "max": r.max,
                "fraction": r.fraction,
                "messages": list(r.messages),
            }
            for r in report.results
        ],
    }


def render_machine(report: QualityReport) -> str:
    return json.dumps(report_to_dict(report), indent=2, ensure_ascii=False) + "\n"


def render_report(report: QualityReport, format: str = "human") -> str:
    if format == "human":
        return render_human(report)
    if format == "machine":
        return render_machine(report)
    raise ValueError(f"unknown report format {format!r}")


def report_from_dict(doc: dict) -> QualityReport:
    results = tuple(
        IndicatorResult(i["id"], i["dimension"], i["awarded"], i["max"], i["fraction"], tuple(i["messages"]))
        for i in doc["indicators"]
    )
    report = QualityReport(doc["dataset"], doc["rubric"], results, doc.get("evaluated"))
    if report.total != doc["total"] or report.max != doc["max"]:
        raise ValueError("report totals do not match its indicators")
    return report


def parse_report(text: str) -> QualityReport:
    return report_from_dict(json.loads(text))
