"""Metadata quality scoring against a weighted indicator rubric."""

from .evaluate import (
    CHECKS,
    PROBE_FAILURE,
    DimensionScore,
    IndicatorResult,
    MissingProbe,
    QualityReport,
    UnknownCheck,
    evaluate,
    evaluate_indicator,
    round_half_up,
)
from .report import parse_report, render_report, report_from_dict, report_to_dict
from .rubric import DEFAULT_RUBRIC, DIMENSIONS, Indicator, Rubric, UnknownRubric, get_rubric, load_rubric
from .stats import CatalogStats, EmptyFleet, Summary, aggregate_catalog, render_stats

__all__ = [
    "CHECKS", "PROBE_FAILURE", "DimensionScore", "IndicatorResult", "MissingProbe", "QualityReport",
    "UnknownCheck", "evaluate", "evaluate_indicator", "round_half_up", "parse_report", "render_report",
    "report_from_dict", "report_to_dict", "DEFAULT_RUBRIC", "DIMENSIONS", "Indicator", "Rubric",
    "UnknownRubric", "get_rubric", "load_rubric", "CatalogStats", "EmptyFleet", "Summary",
    "aggregate_catalog", "render_stats",
]
