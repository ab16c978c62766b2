"""Fleet statistics over quality reports."""

from __future__ import annotations

import statistics
from collections.abc import Sequence
from dataclasses import dataclass

from .evaluate import QualityReport


class EmptyFleet(ValueError):
    pass


@dataclass(frozen=True)
class Summary:
    mean: float
    median: float
    sd: float  # population standard deviation

    @classmethod
    def of(cls, values: Sequence[float]) -> Summary:
        return cls(statistics.fmean(values), float(statistics.median(values)), statistics.pstdev(values))


@dataclass(frozen=True)
class CatalogStats:
    count: int
    dimensions: dict[str, Summary]
    total: Summary

    @property
    def total_mean(self) -> float:
        return self.total.mean


def aggregate_catalog(reports: Sequence[QualityReport]) -> CatalogStats:
    if not reports:
        raise EmptyFleet("cannot aggregate an empty list of reports")
    names: list[str] = []
    for r in reports:
        names += [d.name for d in r.dimensions if d.name not in names]
    per_dim = {}
    for name in names:
        values = [next((d.points for d in r.dimensions if d.name == name), 0) for r in reports]
        per_dim[name] = Summary.of(values)
    return CatalogStats(len(reports), per_dim, Summary.of([r.total for r in reports]))


def render_stats(stats: CatalogStats) -> str:
    lines = [f"{'dimension':<18}{'mean':>10}{'median':>10}{'sd':>10}"]
    for name, s in list(stats.dimensions.items()) + [("Total", stats.total)]:
        lines.append(f"{name:<18}{s.mean:>10.2f}{s.median:>10.2f}{s.sd:>10.2f}")
    lines.append(f"datasets: {stats.count}")
    return "\n".join(lines) + "\n"
