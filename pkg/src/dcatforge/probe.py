"""HTTP HEAD accessibility probes for distribution URLs.

``probe_all`` never raises for network trouble: anything that does not end in
an HTTP status line is recorded as ``None`` (no response).
"""

from __future__ import annotations

import http.client
import time
from collections.abc import Iterable, Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Protocol
from urllib.parse import urljoin, urlsplit

USER_AGENT = "dcat-forge-prober/1.0"
MAX_REDIRECTS = 5
_REDIRECTS = {301, 302, 303, 307, 308}

ACCESSIBLE = "accessible"
INACCESSIBLE = "inaccessible"


def classify_status(code: int | None) -> str:
    return ACCESSIBLE if code is not None and 200 <= code <= 399 else INACCESSIBLE


class Resolver(Protocol):
    def head(self, url: str, timeout: float) -> int | None: ...


class StubResolver:
    """Answers from a fixed URL -> status table; unknown URLs get no response."""

    def __init__(self, table: Mapping[str, int | None]):
        self.table = dict(table)

    def head(self, url: str, timeout: float) -> int | None:
        return self.table.get(url)

    @classmethod
    def from_file(cls, path: str | Path) -> StubResolver:
        return cls(load_probe_table(path))


def parse_probe_table(text: str) -> dict[str, int | None]:
    out: dict[str, int | None] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"probe table line {lineno}: expected URL and status, got {raw!r}")
        url, status = parts
        if status.lower() == "none":
            out[url] = None
        elif status.isdigit():
            out[url] = int(status)
        else:
            raise ValueError(f"probe table line {lineno}: bad status {status!r}")
    return out


def load_probe_table(path: str | Path) -> dict[str, int | None]:
    return parse_probe_table(Path(path).read_text(encoding="utf-8"))


class LiveResolver:
    """Plain HTTP/1.1 HEAD. Redirects are followed up to ``MAX_REDIRECTS`` hops."""

    def head(self, url: str, timeout: float) -> int | None:
        deadline = time.monotonic() + timeout
        for _ in range(MAX_REDIRECTS + 1):
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                return None
            try:
                status, location = self._head_once(url, remaining)
            except (OSError, http.client.HTTPException, ValueError):
                return None
            if status in _REDIRECTS and location:
                url = urljoin(url, location)
                continue
            return status
        # redirect chain too long: classify the last 3xx as-is
        return status

    @staticmethod
    def _head_once(url: str, timeout: float) -> tuple[int, str | None]:
        parts = urlsplit(url)
        if parts.scheme == "https":
            conn: http.client.HTTPConnection = http.client.HTTPSConnection(parts.netloc, timeout=timeout)
        elif parts.scheme == "http":
            conn = http.client.HTTPConnection(parts.netloc, timeout=timeout)
        else:
            raise ValueError(f"unsupported scheme {parts.scheme!r}")
        path = parts.path or "/"
        if parts.query:
            path += "?" + parts.query
        try:
            conn.request("HEAD", path, headers={"User-Agent": USER_AGENT})
            resp = conn.getresponse()
            return resp.status, resp.getheader("Location")
        finally:
            conn.close()


@dataclass(frozen=True)
class ProbeConfig:
    timeout_ms: int = 5000
    parallelism: int = 8
    retries: int = 1
    resolver: Resolver = field(default_factory=LiveResolver)

    def __post_init__(self):
        if self.timeout_ms <= 0:
            raise ValueError("timeout_ms must be positive")
        if self.parallelism < 1:
            raise ValueError("parallelism must be at least 1")
        if self.retries < 0:
            raise ValueError("retries must be non-negative")


def probe_one(url: str, cfg: ProbeConfig) -> int | None:
    # retry only when nothing answered; a definitive status is final
    timeout = cfg.timeout_ms / 1000
    for _ in range(cfg.retries + 1):
        try:
            status = cfg.resolver.head(url, timeout)
        except Exception:
            status = None
        if status is not None:
            return status
    return None


def probe_all(urls: Iterable[str], cfg: ProbeConfig | None = None) -> Mapping[str, int | None]:
    cfg = cfg or ProbeConfig()
    unique = sorted(set(urls))
    if not unique:
        return MappingProxyType({})
    with ThreadPoolExecutor(max_workers=min(cfg.parallelism, len(unique))) as pool:
        statuses = list(pool.map(lambda u: probe_one(u, cfg), unique))
    return MappingProxyType(dict(zip(unique, statuses)))
