"""Pull-only source connectors and the polling rule."""

from __future__ import annotations

import json
import urllib.request
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Any
from urllib.parse import unquote, urlsplit

from ..rdf.terms import is_absolute_iri
from .mapping import get_path

DEFAULT_INTERVAL = 300


class FetchError(Exception):
    pass


@dataclass(frozen=True)
class SourceConfig:
    source_id: str
    endpoint: str
    interval: float = DEFAULT_INTERVAL
    auth_header: str | None = None
    records_path: str | None = None

    def __post_init__(self):
        if self.interval <= 0:
            raise ValueError(f"source {self.source_id!r}: interval must be positive")
        if not is_absolute_iri(self.endpoint):
            raise ValueError(f"source {self.source_id!r}: endpoint must be an absolute IRI")


def should_fetch(cfg: SourceConfig, last: datetime | float | None, now: datetime | float) -> bool:
    if last is None:
        return True
    elapsed = (now - last).total_seconds() if isinstance(now, datetime) else now - last
    return elapsed >= cfg.interval


def _read(cfg: SourceConfig, timeout: float) -> bytes:
    parts = urlsplit(cfg.endpoint)
    if parts.scheme == "file":
        return Path(unquote(parts.path)).read_bytes()
    req = urllib.request.Request(cfg.endpoint, headers={"Accept": "application/json"})
    if cfg.auth_header:
        name, _, value = cfg.auth_header.partition(":")
        req.add_header(name.strip(), value.strip())
    with urllib.request.urlopen(req, timeout=timeout) as resp:
        return resp.read()


def fetch_records(cfg: SourceConfig, timeout: float = 30.0) -> list[Any]:
    """GET the endpoint and return its list of raw JSON records."""
    try:
        payload = json.loads(_read(cfg, timeout))
    except (OSError, ValueError) as exc:
        raise FetchError(f"{cfg.source_id}: {exc}") from exc
    if cfg.records_path:
        try:
            payload = get_path(payload, cfg.records_path)
        except KeyError:
            raise FetchError(f"{cfg.source_id}: payload has nothing at {cfg.records_path}") from None
    if isinstance(payload, dict):
        payload = [payload]
    if not isinstance(payload, list):
        raise FetchError(f"{cfg.source_id}: payload is not a list of records")
    return payload
