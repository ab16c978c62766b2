"""Allow-list field mapping from raw JSON records to NGSI-LD-shaped entities.

Paths are ``/``-separated object keys; a segment of digits indexes a list.
Only assigned fields survive. Drop paths redact parts of assigned values.
"""

from __future__ import annotations

import copy
import hashlib
import json
import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Any

from ..rdf.terms import is_absolute_iri

_MISSING = object()  # get_path default: raise
_ABSENT = object()


class MappingError(ValueError):
    pass


class MissingSourcePath(MappingError):
    def __init__(self, paths: list[str]):
        super().__init__("missing source paths: " + ", ".join(paths))
        self.paths = paths


class InvalidRecord(MappingError):
    pass


def split_path(path: str) -> tuple[str, ...]:
    parts = tuple(p for p in path.strip().split("/") if p != "")
    if not parts:
        raise MappingError(f"empty path {path!r}")
    return parts


def _is_prefix(a: tuple[str, ...], b: tuple[str, ...]) -> bool:
    return len(a) <= len(b) and b[: len(a)] == a


def get_path(value: Any, path: tuple[str, ...] | str, default: Any = _MISSING) -> Any:
    parts = split_path(path) if isinstance(path, str) else path
    cur = value
    for seg in parts:
        if isinstance(cur, dict) and seg in cur:
            cur = cur[seg]
        elif isinstance(cur, list) and seg.isdigit() and int(seg) < len(cur):
            cur = cur[int(seg)]
        else:
            if default is _MISSING:
                raise KeyError("/" + "/".join(parts))
            return default
    return cur


def _delete_path(value: Any, parts: tuple[str, ...]) -> None:
    parent = get_path(value, parts[:-1], None) if len(parts) > 1 else value
    last = parts[-1]
    if isinstance(parent, dict):
        parent.pop(last, None)
    elif isinstance(parent, list) and last.isdigit() and int(last) < len(parent):
        del parent[int(last)]


def _set_path(target: dict, parts: tuple[str, ...], value: Any) -> None:
    cur = target
    for seg in parts[:-1]:
        nxt = cur.setdefault(seg, {})
        if not isinstance(nxt, dict):
            raise MappingError(f"target path /{'/'.join(parts)} crosses a non-object value")
        cur = nxt
    cur[parts[-1]] = value


def check_json_value(value: Any, where: str = "") -> None:
    if value is None or isinstance(value, (bool, int, str)):
        return
    if isinstance(value, float):
        if not math.isfinite(value):
            raise InvalidRecord(f"non-finite number at {where or '/'}")
        return
    if isinstance(value, list):
        for i, v in enumerate(value):
            check_json_value(v, f"{where}/{i}")
        return
    if isinstance(value, dict):
        for k, v in value.items():
            if not isinstance(k, str):
                raise InvalidRecord(f"non-string key {k!r} at {where or '/'}")
            check_json_value(v, f"{where}/{k}")
        return
    raise InvalidRecord(f"{type(value).__name__} is not a JSON value (at {where or '/'})")


def parse_record(text: str | bytes) -> Any:
    try:
        return json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise InvalidRecord(f"record is not JSON: {exc}") from exc


@dataclass(frozen=True)
class Assignment:
    target: str
    source: str


@dataclass(frozen=True)
class MappingSpec:
    entity_type: str
    assignments: tuple[Assignment, ...]
    drop: tuple[str, ...] = ()
    id_path: str | None = None

    def __post_init__(self):
        if not self.entity_type or not self.entity_type.replace("_", "").isalnum():
            raise MappingError(f"entity type {self.entity_type!r} must be a non-empty identifier")
        targets = [split_path(a.target) for a in self.assignments]
        if len(set(targets)) != len(targets):
            raise MappingError("assignment target paths must be unique")
        for t in targets:
            if t[0] in ("id", "type"):
                raise MappingError(f"target /{'/'.join(t)} would shadow the entity id or type")
        for a, b in ((a, b) for a in targets for b in targets if a != b):
            if _is_prefix(a, b):
                raise MappingError(f"target /{'/'.join(a)} is a prefix of /{'/'.join(b)}")
        sources = [split_path(a.source) for a in self.assignments]
        if self.id_path:
            sources.append(split_path(self.id_path))
        for d in map(split_path, self.drop):
            for s in sources:
                if _is_prefix(d, s):
                    raise MappingError(f"drop path /{'/'.join(d)} overlaps assigned source /{'/'.join(s)}")

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> MappingSpec:
        assign = doc.get("assign", {})
        if not isinstance(assign, Mapping):
            raise MappingError("'assign' must map target paths to source paths")
        return cls(
            entity_type=doc["entity_type"],
            assignments=tuple(Assignment(str(t), str(s)) for t, s in assign.items()),
            drop=tuple(doc.get("drop", ())),
            id_path=doc.get("id_path"),
        )


@dataclass(frozen=True)
class Entity:
    id: str
    type: str
    attributes: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not is_absolute_iri(self.id):
            raise ValueError(f"entity id {self.id!r} is not an absolute IRI")
        if not self.type:
            raise ValueError("entity type must be non-empty")

    def view(self) -> dict[str, Any]:
        """What template Extract rules read from."""
        return {"id": self.id, "type": self.type, **self.attributes}


def _path_order(parts: tuple[str, ...]) -> tuple:
    return tuple((0, int(s), "") if s.isdigit() else (1, 0, s) for s in parts)


def _content_id(attributes: dict) -> str:
    return hashlib.sha256(json.dumps(attributes, sort_keys=True).encode()).hexdigest()[:16]


def apply_mapping(spec: MappingSpec, record: Any) -> Entity:
    if not isinstance(record, dict):
        raise InvalidRecord(f"record must be a JSON object, got {type(record).__name__}")
    check_json_value(record)
    drops = [split_path(d) for d in spec.drop]
    missing = []
    attributes: dict[str, Any] = {}
    for a in spec.assignments:
        src = split_path(a.source)
        value = get_path(record, src, _ABSENT)
        if value is _ABSENT:
            missing.append("/" + "/".join(src))
            continue
        value = copy.deepcopy(value)
        # redact dropped descendants; reverse path order keeps list indices valid
        for d in sorted((d for d in drops if _is_prefix(src, d)), key=_path_order, reverse=True):
            _delete_path(value, d[len(src):])
        _set_path(attributes, split_path(a.target), value)
    raw_id = None
    if spec.id_path:
        raw_id = get_path(record, spec.id_path, _ABSENT)
        if raw_id is _ABSENT:
            missing.append("/" + "/".join(split_path(spec.id_path)))
        elif not isinstance(raw_id, (str, int)) or isinstance(raw_id, bool) or str(raw_id) == "":
            raise InvalidRecord(f"id at {spec.id_path} must be a non-empty string or integer")
    if missing:
        raise MissingSourcePath(missing)
    local = str(raw_id) if raw_id is not None else _content_id(attributes)
    return Entity(f"urn:ngsi-ld:{spec.entity_type}:{local}", spec.entity_type, attributes)
