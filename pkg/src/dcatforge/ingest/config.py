"""Pipeline configuration file (YAML).

Top-level keys::

    portal_base_iri: https://portal.example.org/     # required, ends with '/'
    rule_set: dcatap-2.1.0-min                        # optional
    rubric: mqa-405                                   # optional
    min_score: 300                                    # optional, flag threshold
    store: store                                      # store directory
    probes: {stub: probes.tsv}                        # or {live: {timeout_ms: 5000, parallelism: 8, retries: 1}}
    templates: {<name>: {<field>: <rule>, ...}}
    sources:
      - id: aemet
        organization: aemet
        endpoint: data/aemet.json                     # http(s) IRI, file IRI or a path
        interval: 300
        auth_header: "Authorization: Bearer ..."      # optional
        records_path: /data                           # optional
        mapping: {entity_type: ..., id_path: ..., assign: {target: source}, drop: [...]}
        template: <name> | {<field>: <rule>}

Relative paths resolve against the config file's directory.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from ..dcat import DEFAULT_RULE_SET, get_rule_set
from ..mqa import DEFAULT_RUBRIC, get_rubric
from ..probe import LiveResolver, ProbeConfig, StubResolver
from ..rdf.terms import is_absolute_iri
from .mapping import MappingError, MappingSpec
from .source import DEFAULT_INTERVAL, SourceConfig
from .template import MetadataTemplate


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SourcePipeline:
    source: SourceConfig
    organization: str
    mapping: MappingSpec
    template: MetadataTemplate


@dataclass(frozen=True)
class PipelineConfig:
    portal_base_iri: str
    sources: tuple[SourcePipeline, ...]
    store: Path | None = None
    probes: ProbeConfig = field(default_factory=ProbeConfig)
    rule_set: str = DEFAULT_RULE_SET
    rubric: str = DEFAULT_RUBRIC
    min_score: int = 0


def _endpoint(value: str, base: Path) -> str:
    if is_absolute_iri(value) and not (len(value) > 1 and value[1] == ":"):
        return value
    return (base / value).resolve().as_uri()


def _probes(doc: Any, base: Path) -> ProbeConfig:
    if doc is None:
        return ProbeConfig()
    if not isinstance(doc, dict) or len(doc) != 1 or not {"stub", "live"} & set(doc):
        raise ConfigError("probes must be {stub: <file>} or {live: {...}}")
    if "stub" in doc:
        return ProbeConfig(resolver=StubResolver.from_file(base / doc["stub"]))
    opts = doc["live"] or {}
    if opts is True:
        opts = {}
    return ProbeConfig(resolver=LiveResolver(), **opts)


def config_from_dict(doc: Any, base: Path | str = ".") -> PipelineConfig:
    base = Path(base)
    if not isinstance(doc, dict):
        raise ConfigError("config must be a mapping")
    try:
        portal = doc["portal_base_iri"]
        if not is_absolute_iri(portal) or not portal.endswith("/"):
            raise ConfigError("portal_base_iri must be an absolute IRI ending in '/'")
        rule_set = doc.get("rule_set", DEFAULT_RULE_SET)
        get_rule_set(rule_set)
        rubric = doc.get("rubric", DEFAULT_RUBRIC)
        get_rubric(rubric)
        templates = doc.get("templates", {}) or {}
        sources = []
        seen = set()
        for s in doc.get("sources") or []:
            sid = s["id"]
            if sid in seen:
                raise ConfigError(f"duplicate source id {sid!r}")
            seen.add(sid)
            tpl = s["template"]
            if isinstance(tpl, str):
                if tpl not in templates:
                    raise ConfigError(f"source {sid!r} references unknown template {tpl!r}")
                tpl = templates[tpl]
            sources.append(
                SourcePipeline(
                    SourceConfig(
                        sid,
                        _endpoint(str(s["endpoint"]), base),
                        s.get("interval", DEFAULT_INTERVAL),
                        s.get("auth_header"),
                        s.get("records_path"),
                    ),
                    s.get("organization", sid),
                    MappingSpec.from_dict(s["mapping"]),
                    MetadataTemplate.from_dict(tpl, rule_set),
                )
            )
        if not sources:
            raise ConfigError("config declares no sources")
        return PipelineConfig(
            portal_base_iri=portal,
            sources=tuple(sources),
            store=base / doc["store"] if doc.get("store") else None,
            probes=_probes(doc.get("probes"), base),
            rule_set=rule_set,
            rubric=rubric,
            min_score=int(doc.get("min_score", 0)),
        )
    except ConfigError:
        raise
    except KeyError as exc:
        raise ConfigError(f"missing required key {exc}") from None
    except (TypeError, ValueError, LookupError, OSError, MappingError) as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path: str | Path) -> PipelineConfig:
    path = Path(path)
    try:
        doc = yaml.safe_load(path.read_text(encoding="utf-8"))
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    return config_from_dict(doc, path.parent)
