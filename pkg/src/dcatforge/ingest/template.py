"""Declarative DCAT-AP metadata templates.

Each dataset field gets one rule: ``Extract`` reads from the entity,
``Context`` reads from injected run context, ``Constant`` copies a value.
The clock is part of the context; generation never samples it.
"""

from __future__ import annotations

import re
import uuid
from collections.abc import Mapping
from dataclasses import dataclass
from datetime import datetime
from typing import Any, Union

from ..dcat import (
    DEFAULT_RULE_SET,
    MANDATORY_FIELDS,
    DcatDataset,
    DcatDistribution,
    default_vocabulary,
    get_rule_set,
)
from ..dcat.model import IANA_MEDIA_TYPES
from ..rdf import DCAT, DCT, FOAF, RDF_TYPE, VCARD, XSD, BNode, Graph, IRI, Literal, Triple
from ..rdf.terms import is_absolute_iri
from .mapping import Entity, get_path

CONTEXT_KINDS = ("now", "source-id", "entity-count", "portal-base-iri")

DATASET_FIELDS = (
    "title", "description", "keywords", "themes", "spatial", "temporal", "issued", "modified",
    "publisher", "contact_point", "access_rights", "version_info", "landing_page", "identifier",
)
DISTRIBUTION_FIELDS = tuple(
    "distribution." + f
    for f in ("access_url", "download_url", "format", "media_type", "license", "rights", "byte_size")
)
FIELDS = DATASET_FIELDS + DISTRIBUTION_FIELDS


class TemplateError(ValueError):
    def __init__(self, rule: str, reason: str):
        super().__init__(f"{rule}: {reason}")
        self.rule = rule


def _slug(text: str) -> str:
    return re.sub(r"[^a-z0-9]+", "_", text.lower()).strip("_")


@dataclass(frozen=True)
class Extract:
    """Value at ``path`` in the entity view, optionally narrowed and reshaped.

    ``pattern`` keeps the first regex group (or the whole match); ``format``
    is a str.format string where ``{}`` is the value and named fields refer
    to top-level entity attributes; ``slug`` lowercases and joins words with
    underscores.
    """

    path: str
    pattern: str | None = None
    format: str | None = None
    slug: bool = False


@dataclass(frozen=True)
class Context:
    kind: str
    format: str | None = None

    def __post_init__(self):
        if self.kind not in CONTEXT_KINDS:
            raise ValueError(f"unknown context kind {self.kind!r}; expected one of {CONTEXT_KINDS}")


@dataclass(frozen=True)
class Constant:
    value: Any


FieldRule = Union[Extract, Context, Constant]


@dataclass(frozen=True)
class GenerationContext:
    now: datetime
    source_id: str
    entity_count: int
    portal_base_iri: str

    def __post_init__(self):
        if not is_absolute_iri(self.portal_base_iri):
            raise ValueError("portal_base_iri must be an absolute IRI")

    def value(self, kind: str) -> Any:
        return {
            "now": self.now,
            "source-id": self.source_id,
            "entity-count": self.entity_count,
            "portal-base-iri": self.portal_base_iri,
        }[kind]


@dataclass(frozen=True)
class MetadataTemplate:
    rules: Mapping[str, FieldRule]
    rule_set: str = DEFAULT_RULE_SET

    def __post_init__(self):
        unknown = sorted(set(self.rules) - set(FIELDS))
        if unknown:
            raise TemplateError(unknown[0], "not a templatable DCAT field")
        for rule_id in get_rule_set(self.rule_set).rules:
            needed = MANDATORY_FIELDS.get(rule_id)
            if needed and needed not in self.rules:
                raise TemplateError(needed, f"required by profile rule {rule_id} but has no template rule")

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any], rule_set: str = DEFAULT_RULE_SET) -> MetadataTemplate:
        return cls({name: rule_from_dict(name, spec) for name, spec in doc.items()}, rule_set)


def rule_from_dict(name: str, spec: Any) -> FieldRule:
    """``{extract: path, ...}``, ``{context: kind}``, ``{constant: value}``."""
    if not isinstance(spec, Mapping) or len({"extract", "context", "constant"} & set(spec)) != 1:
        raise TemplateError(name, "rule must have exactly one of extract, context, constant")
    try:
        if "extract" in spec:
            return Extract(str(spec["extract"]), spec.get("pattern"), spec.get("format"), bool(spec.get("slug", False)))
        if "context" in spec:
            return Context(spec["context"], spec.get("format"))
    except ValueError as exc:
        raise TemplateError(name, str(exc)) from None
    return Constant(spec["constant"])


def dataset_uuid(entity: Entity) -> str:
    return str(uuid.uuid5(uuid.NAMESPACE_URL, entity.id))


def _resolve_rule(name: str, rule: FieldRule, entity: Entity, ctx: GenerationContext) -> Any:
    if isinstance(rule, Constant):
        return rule.value
    if isinstance(rule, Context):
        value = ctx.value(rule.kind)
        return rule.format.format(value) if rule.format else value
    view = entity.view()
    try:
        value = get_path(view, rule.path)
    except KeyError:
        raise TemplateError(name, f"entity {entity.id} has no value at {rule.path}") from None
    if rule.pattern is not None:
        m = re.search(rule.pattern, str(value))
        if m is None:
            raise TemplateError(name, f"pattern {rule.pattern!r} does not match {value!r}")
        value = m.group(1) if m.groups() else m.group(0)
    if rule.format is not None:
        scalars = {k: v for k, v in view.items() if isinstance(v, (str, int, float))}
        try:
            value = rule.format.format(value, **scalars)
        except (KeyError, IndexError) as exc:
            raise TemplateError(name, f"format {rule.format!r} references missing field {exc}") from None
    if rule.slug:
        value = _slug(str(value))
    return value


# -- value coercion ------------------------------------------------------


def _text(name: str, v: Any) -> Literal:
    if isinstance(v, (dict, list)):
        raise TemplateError(name, "expected a scalar value")
    return Literal(str(v))


def _iri(name: str, v: Any) -> IRI:
    if not isinstance(v, str) or not is_absolute_iri(v):
        raise TemplateError(name, f"expected an absolute IRI, got {v!r}")
    return IRI(v)


def _vocab_iri(name: str, v: Any, vocab_id: str) -> IRI:
    if not isinstance(v, str):
        raise TemplateError(name, f"expected a code or IRI, got {v!r}")
    return IRI(default_vocabulary(vocab_id).resolve(v))


def _datetime(name: str, v: Any) -> Literal:
    if isinstance(v, datetime):
        v = v.isoformat()
    if not isinstance(v, str) or not v:
        raise TemplateError(name, f"expected a dateTime, got {v!r}")
    return Literal(v, XSD.dateTime)


def _iri_or_text(name: str, v: Any):
    if isinstance(v, str) and is_absolute_iri(v) and not any(c.isspace() for c in v):
        return IRI(v)
    return _text(name, v)


def _as_list(v: Any) -> list:
    return list(v) if isinstance(v, (list, tuple)) else [v]


class _Builder:
    def __init__(self, dataset_iri: IRI):
        self.iri = dataset_iri
        self.extra: list[Triple] = []

    def node(self, name: str, v: Any, label: str, build) -> IRI | BNode:
        if isinstance(v, Mapping):
            node: IRI | BNode = _iri(name, v["iri"]) if "iri" in v else BNode(label)
            build(node, v)
            return node
        return _iri(name, v)

    def temporal(self, node, v):
        self.extra.append(Triple(node, RDF_TYPE, DCT.PeriodOfTime))
        for key, pred in (("start", DCAT.startDate), ("end", DCAT.endDate)):
            if v.get(key) is not None:
                self.extra.append(Triple(node, pred, _datetime(f"temporal.{key}", v[key])))

    def publisher(self, node, v):
        self.extra.append(Triple(node, RDF_TYPE, FOAF.Agent))
        if v.get("name"):
            self.extra.append(Triple(node, FOAF.name, Literal(str(v["name"]))))

    def contact(self, node, v):
        self.extra.append(Triple(node, RDF_TYPE, VCARD.Organization))
        if v.get("fn"):
            self.extra.append(Triple(node, VCARD.fn, Literal(str(v["fn"]))))
        if v.get("email"):
            email = str(v["email"])
            self.extra.append(Triple(node, VCARD.hasEmail, IRI(email if email.startswith("mailto:") else "mailto:" + email)))


def generate_metadata(template: MetadataTemplate, entity: Entity, ctx: GenerationContext) -> DcatDataset:
    values = {name: _resolve_rule(name, rule, entity, ctx) for name, rule in sorted(template.rules.items())}
    iri = IRI(ctx.portal_base_iri + "dataset/" + dataset_uuid(entity))
    b = _Builder(iri)
    kw: dict[str, Any] = {}
    for name, v in values.items():
        if v is None or name.startswith("distribution."):
            continue
        if name in ("title", "description", "version_info", "identifier"):
            kw[name] = _text(name, v)
        elif name == "keywords":
            kw[name] = tuple(_text(name, k) for k in _as_list(v))
        elif name == "themes":
            kw[name] = tuple(_vocab_iri(name, t, "data-theme") for t in _as_list(v))
        elif name == "spatial":
            kw[name] = _iri_or_text(name, v)
        elif name == "temporal":
            kw[name] = b.node(name, v, "temporal", b.temporal)
        elif name in ("issued", "modified"):
            kw[name] = _datetime(name, v)
        elif name == "publisher":
            kw[name] = b.node(name, v, "publisher", b.publisher)
        elif name == "contact_point":
            kw[name] = b.node(name, v, "contact", b.contact)
        elif name == "access_rights":
            kw[name] = _vocab_iri(name, v, "access-rights")
        elif name == "landing_page":
            kw[name] = _iri(name, v)
    dist_values = {k.split(".", 1)[1]: v for k, v in values.items() if k.startswith("distribution.") and v is not None}
    distributions = ()
    if dist_values:
        dk: dict[str, Any] = {}
        for name, v in dist_values.items():
            full = "distribution." + name
            if name in ("access_url", "download_url"):
                dk[name] = _iri(full, v)
            elif name == "format":
                dk[name] = _vocab_iri(full, v, "file-types")
            elif name == "media_type":
                text = str(v)
                dk[name] = IRI(text if is_absolute_iri(text) else IANA_MEDIA_TYPES + text)
            elif name == "license":
                dk[name] = _vocab_iri(full, v, "licenses")
            elif name == "rights":
                dk[name] = _iri_or_text(full, v)
            elif name == "byte_size":
                if isinstance(v, bool) or not isinstance(v, int) or v < 0:
                    raise TemplateError(full, f"expected a non-negative integer, got {v!r}")
                dk[name] = Literal(str(v), XSD.decimal)
        try:
            distributions = (DcatDistribution(IRI(iri.value + "/resource/0"), **dk),)
        except ValueError as exc:
            raise TemplateError("distribution", str(exc)) from None
    return DcatDataset(iri, distributions=distributions, residue=Graph(b.extra), **kw)
