"""Indicator checks and weighted scoring.

Scoring never touches the network: URL accessibility comes in through a
pre-computed probe map (see :mod:`dcatforge.probe`).
"""

from __future__ import annotations

from collections.abc import Callable, Mapping
from dataclasses import dataclass
from datetime import datetime

from ..dcat import (
    DcatDataset,
    DcatDistribution,
    ProfileRuleSet,
    Vocabulary,
    default_vocabularies,
    get_rule_set,
    media_type_text,
    validate_profile,
    vocabulary_contains,
    DEFAULT_RULE_SET,
)
from ..probe import classify_status
from ..rdf import IRI
from .rubric import Indicator, Rubric, get_rubric

PROBE_FAILURE = (
    "Responded status code of the HTTP HEAD request is not in the 200 or 300 range. No weight assigned"
)

ProbeResultMap = Mapping[str, "int | None"]


class UnknownCheck(LookupError):
    pass


class MissingProbe(LookupError):
    def __init__(self, url: str):
        super().__init__(f"no probe result for {url}")
        self.url = url


@dataclass(frozen=True)
class IndicatorResult:
    indicator: str
    dimension: str
    awarded: int
    max: int
    fraction: float
    messages: tuple[str, ...] = ()

    def __post_init__(self):
        if not 0 <= self.awarded <= self.max:
            raise ValueError(f"{self.indicator}: awarded {self.awarded} outside [0, {self.max}]")
        if not 0.0 <= self.fraction <= 1.0:
            raise ValueError(f"{self.indicator}: fraction {self.fraction} outside [0, 1]")

    @property
    def passed(self) -> bool:
        return self.awarded == self.max


@dataclass(frozen=True)
class DimensionScore:
    name: str
    points: int
    max: int


@dataclass(frozen=True)
class QualityReport:
    dataset: str
    rubric: str
    results: tuple[IndicatorResult, ...]
    evaluated_at: str | None = None

    @property
    def total(self) -> int:
        return sum(r.awarded for r in self.results)

    @property
    def max(self) -> int:
        return sum(r.max for r in self.results)

    @property
    def dimensions(self) -> tuple[DimensionScore, ...]:
        order: dict[str, list[int]] = {}
        for r in self.results:
            acc = order.setdefault(r.dimension, [0, 0])
            acc[0] += r.awarded
            acc[1] += r.max
        return tuple(DimensionScore(name, pts, mx) for name, (pts, mx) in order.items())

    def dimension(self, name: str) -> DimensionScore:
        for d in self.dimensions:
            if d.name == name:
                return d
        raise KeyError(name)

    def result(self, indicator_id: str) -> IndicatorResult:
        for r in self.results:
            if r.indicator == indicator_id:
                return r
        raise KeyError(indicator_id)


@dataclass(frozen=True)
class _Outcome:
    passed: int
    total: int
    messages: tuple[str, ...] = ()


@dataclass(frozen=True)
class _Context:
    probes: ProbeResultMap
    vocabularies: Mapping[str, Vocabulary]
    rules: ProfileRuleSet


def round_half_up(weight: int, passed: int, total: int) -> int:
    """weight * passed / total rounded half up, in exact integer arithmetic."""
    if total <= 0:
        return 0
    return (2 * weight * passed + total) // (2 * total)


def _dataset_check(ok: bool, message: str) -> _Outcome:
    return _Outcome(1, 1) if ok else _Outcome(0, 1, (message,))


def _per_distribution(
    d: DcatDataset, check: Callable[[DcatDistribution], str | None]
) -> _Outcome:
    if not d.distributions:
        return _Outcome(0, 0, ("the dataset has no distributions",))
    passed = 0
    messages = []
    for dist in d.distributions:
        problem = check(dist)
        if problem is None:
            passed += 1
        else:
            messages.append(f"distribution {dist.id}: {problem}")
    return _Outcome(passed, len(d.distributions), tuple(messages))


def _url_check(attr: str, label: str):
    def check(d: DcatDataset, ctx: _Context) -> _Outcome:
        def one(dist: DcatDistribution) -> str | None:
            url = getattr(dist, attr)
            if url is None:
                return f"{label} is missing"
            if url.value not in ctx.probes:
                raise MissingProbe(url.value)
            if classify_status(ctx.probes[url.value]) != "accessible":
                return f"{url.value}: {PROBE_FAILURE}"
            return None

        return _per_distribution(d, one)

    return check


def _format_flag(flag: str, label: str):
    def check(d: DcatDataset, ctx: _Context) -> _Outcome:
        def one(dist: DcatDistribution) -> str | None:
            if dist.format is None:
                return "dct:format is missing"
            m = vocabulary_contains(ctx.vocabularies["file-types"], dist.format)
            if not m:
                return f"format {dist.format} is not in the file-types vocabulary"
            if not getattr(m, flag):
                return f"format {dist.format} is not {label}"
            return None

        return _per_distribution(d, one)

    return check


def _media_type(d: DcatDataset, ctx: _Context) -> _Outcome:
    def one(dist: DcatDistribution) -> str | None:
        if dist.media_type is None:
            return "dcat:mediaType is missing"
        if not vocabulary_contains(ctx.vocabularies["media-types"], media_type_text(dist.media_type)):
            return f"media type {media_type_text(dist.media_type)} is not in the media-types vocabulary"
        return None

    return _per_distribution(d, one)


def _present(attr: str, label: str):
    def check(d: DcatDataset, ctx: _Context) -> _Outcome:
        return _per_distribution(d, lambda dist: None if getattr(dist, attr) is not None else f"{label} is missing")

    return check


def _themes(d: DcatDataset, ctx: _Context) -> _Outcome:
    if not d.themes:
        return _Outcome(0, 1, ("dcat:theme is missing",))
    ok = any(vocabulary_contains(ctx.vocabularies["data-theme"], t) for t in d.themes)
    return _dataset_check(ok, "no dcat:theme from the data-theme vocabulary")


def _dcat_compliant(d: DcatDataset, ctx: _Context) -> _Outcome:
    violations = validate_profile(d, ctx.rules, ctx.vocabularies)
    if not violations:
        return _Outcome(1, 1)
    return _Outcome(0, 1, tuple(f"{v.rule}: {v.message}" for v in violations))


def _license(d: DcatDataset, ctx: _Context) -> _Outcome:
    licences = ctx.vocabularies["licenses"]
    if not any(dist.license is not None for dist in d.distributions):
        return _Outcome(0, 1, ("no distribution carries dct:license",))
    ok = any(
        isinstance(dist.license, IRI) and vocabulary_contains(licences, dist.license)
        for dist in d.distributions
    )
    return _dataset_check(ok, "no distribution license is in the licenses vocabulary")


def _public_access(d: DcatDataset, ctx: _Context) -> _Outcome:
    if d.access_rights is None:
        return _Outcome(0, 1, ("dct:accessRights is missing",))
    ok = bool(vocabulary_contains(ctx.vocabularies["access-rights"], d.access_rights))
    return _dataset_check(ok, f"dct:accessRights {d.access_rights} is not in the access-rights vocabulary")


def _dates(d: DcatDataset, ctx: _Context) -> _Outcome:
    missing = [name for name, v in (("dct:issued", d.issued), ("dct:modified", d.modified)) if v is None]
    return _dataset_check(not missing, " and ".join(missing) + " missing")


CHECKS: dict[str, Callable[[DcatDataset, _Context], _Outcome]] = {
    "keyword-usage": lambda d, ctx: _dataset_check(bool(d.keywords), "dcat:keyword is missing"),
    "theme-usage": _themes,
    "geo-info": lambda d, ctx: _dataset_check(d.spatial is not None, "dct:spatial is missing"),
    "temporal-info": lambda d, ctx: _dataset_check(d.temporal is not None, "dct:temporal is missing"),
    "access-url": _url_check("access_url", "dcat:accessURL"),
    "download-url": _url_check("download_url", "dcat:downloadURL"),
    "format": _present("format", "dct:format"),
    "media-type": _media_type,
    "open-format": _format_flag("open", "an open format"),
    "machine-readable": _format_flag("machine_readable", "machine-readable"),
    "dcat-compliant": _dcat_compliant,
    "license": _license,
    "public-access": _public_access,
    "contact-point": lambda d, ctx: _dataset_check(d.contact_point is not None, "dcat:contactPoint is missing"),
    "publisher-info": lambda d, ctx: _dataset_check(d.publisher is not None, "dct:publisher is missing"),
    "rights": _present("rights", "dct:rights"),
    "size": _present("byte_size", "dcat:byteSize"),
    "date-info": _dates,
}


def _context(probes, rules, vocabularies) -> _Context:
    if isinstance(rules, str):
        rules = get_rule_set(rules)
    return _Context(probes, vocabularies or default_vocabularies(), rules)


def evaluate_indicator(
    indicator: Indicator,
    dataset: DcatDataset,
    probes: ProbeResultMap,
    rules: ProfileRuleSet | str = DEFAULT_RULE_SET,
    vocabularies: Mapping[str, Vocabulary] | None = None,
) -> IndicatorResult:
    ctx = _context(probes, rules, vocabularies)
    return _run(indicator, dataset, ctx)


def _run(indicator: Indicator, dataset: DcatDataset, ctx: _Context) -> IndicatorResult:
    try:
        check = CHECKS[indicator.check]
    except KeyError:
        raise UnknownCheck(f"indicator {indicator.id!r} uses unknown check {indicator.check!r}") from None
    outcome = check(dataset, ctx)
    fraction = outcome.passed / outcome.total if outcome.total else 0.0
    return IndicatorResult(
        indicator=indicator.id,
        dimension=indicator.dimension,
        awarded=round_half_up(indicator.weight, outcome.passed, outcome.total),
        max=indicator.weight,
        fraction=fraction,
        messages=outcome.messages,
    )


def evaluate(
    dataset: DcatDataset,
    probes: ProbeResultMap,
    rubric: Rubric | str | None = None,
    rules: ProfileRuleSet | str = DEFAULT_RULE_SET,
    *,
    vocabularies: Mapping[str, Vocabulary] | None = None,
    now: datetime | str | None = None,
) -> QualityReport:
    """Score ``dataset``. ``now`` only stamps the report; it never affects points."""
    if rubric is None or isinstance(rubric, str):
        rubric = get_rubric(rubric or "mqa-405")
    if rubric.total <= 0:
        raise ValueError(f"rubric {rubric.id!r} has no points to award")
    ctx = _context(probes, rules, vocabularies)
    results = tuple(_run(ind, dataset, ctx) for ind in rubric.indicators)
    stamp = now.isoformat() if isinstance(now, datetime) else now
    return QualityReport(dataset.id.value, rubric.id, results, stamp)
