"""OAI-PMH harvesting client.

``harvest`` is all-or-nothing: any transport or protocol failure raises and
nothing collected so far is returned.
"""

from __future__ import annotations

import urllib.error
import urllib.request
from collections.abc import Iterator, Mapping
from dataclasses import dataclass
from datetime import datetime
from typing import Protocol
from urllib.parse import urlencode

from ..clock import Clock, system_clock
from ..rdf import Graph, RDFError
from ..rdf.rdfxml import XmlElement, graph_from_element, read_xml
from ..store import parse_datestamp
from .server import OAI_NS, XSI_NS, OaiConfig, Repository, handle_request


class HarvestError(Exception):
    pass


class TransportError(HarvestError):
    pass


class ProtocolError(HarvestError):
    def __init__(self, message: str, code: str | None = None):
        super().__init__(message if code is None else f"{code}: {message}")
        self.code = code


class Transport(Protocol):
    def request(self, endpoint: str, params: Mapping[str, str]) -> bytes: ...


class HttpTransport:
    def __init__(self, timeout: float = 30.0):
        self.timeout = timeout

    def request(self, endpoint: str, params: Mapping[str, str]) -> bytes:
        url = f"{endpoint}?{urlencode(params)}"
        try:
            with urllib.request.urlopen(url, timeout=self.timeout) as resp:
                return resp.read()
        except (urllib.error.URLError, OSError) as exc:
            raise TransportError(f"{url}: {exc}") from exc


class LoopbackTransport:
    """Calls the in-process request handler; no sockets involved."""

    def __init__(self, repo: Repository, cfg: OaiConfig | None = None, clock: Clock = system_clock):
        self.repo = repo
        self.cfg = cfg or OaiConfig()
        self.clock = clock
        self.requests = 0

    def request(self, endpoint: str, params: Mapping[str, str]) -> bytes:
        self.requests += 1
        return handle_request(self.repo, dict(params), self.cfg, self.clock).body


@dataclass(frozen=True)
class OaiRecord:
    identifier: str
    datestamp: datetime
    sets: tuple[str, ...]
    deleted: bool
    metadata: Graph | None


def _children(el: XmlElement, local: str) -> list[XmlElement]:
    return [c for c in el.children if c.ns == OAI_NS and c.local == local]


def _one(el: XmlElement, local: str) -> XmlElement:
    found = _children(el, local)
    if len(found) != 1:
        raise ProtocolError(f"expected one <{local}> in <{el.local}>, found {len(found)}")
    return found[0]


def _parse_record(el: XmlElement, prefixes: dict[str, str], prefix: str) -> OaiRecord:
    header = _one(el, "header")
    deleted = ("", "status") in header.attrs and header.attrs[("", "status")] == "deleted"
    ident = _one(header, "identifier").child_text().strip()
    try:
        stamp = parse_datestamp(_one(header, "datestamp").child_text().strip())
    except ValueError as exc:
        raise ProtocolError(f"{ident}: bad datestamp: {exc}") from None
    sets = tuple(s.child_text().strip() for s in _children(header, "setSpec"))
    graph = None
    meta = _children(el, "metadata")
    if not deleted and prefix == "dcat_ap":
        if len(meta) != 1 or len(meta[0].children) != 1:
            raise ProtocolError(f"{ident}: metadata must hold exactly one element")
        try:
            graph = graph_from_element(meta[0].children[0], prefixes)
        except RDFError as exc:
            raise ProtocolError(f"{ident}: unreadable metadata: {exc}") from exc
    return OaiRecord(ident, stamp, sets, deleted, graph)


def _parse_page(data: bytes, verb: str, prefix: str, first: bool) -> tuple[list[OaiRecord], str | None]:
    try:
        root, prefixes = read_xml(data)
    except RDFError as exc:
        raise ProtocolError(f"response is not well-formed XML: {exc}") from exc
    if root is None or root.ns != OAI_NS or root.local != "OAI-PMH":
        raise ProtocolError("response root is not OAI-PMH")
    errors = _children(root, "error")
    if errors:
        code = errors[0].attrs.get(("", "code"), "")
        if code == "noRecordsMatch" and first:
            return [], None
        raise ProtocolError(errors[0].child_text().strip(), code)
    # envelope namespaces are not part of the payload's prefix table
    prefixes = {k: v for k, v in prefixes.items() if k and v not in (OAI_NS, XSI_NS)}
    body = _one(root, verb)
    try:
        return _page_records(body, verb, prefixes, prefix)
    except ValueError as exc:
        raise ProtocolError(f"malformed {verb} response: {exc}") from None


def _page_records(body: XmlElement, verb: str, prefixes: dict[str, str], prefix: str):
    if verb == "ListRecords":
        records = [_parse_record(r, prefixes, prefix) for r in _children(body, "record")]
    else:
        records = []
        for h in _children(body, "header"):
            deleted = h.attrs.get(("", "status")) == "deleted"
            records.append(OaiRecord(
                _one(h, "identifier").child_text().strip(),
                parse_datestamp(_one(h, "datestamp").child_text().strip()),
                tuple(s.child_text().strip() for s in _children(h, "setSpec")),
                deleted, None,
            ))
    tokens = _children(body, "resumptionToken")
    if len(tokens) > 1:
        raise ProtocolError("more than one resumptionToken")
    token = tokens[0].child_text().strip() if tokens else ""
    return records, (token or None)


def harvest_pages(
    endpoint: str,
    prefix: str,
    transport: Transport,
    *,
    verb: str = "ListRecords",
    set_spec: str | None = None,
    from_: str | None = None,
    until: str | None = None,
    max_pages: int = 100_000,
) -> Iterator[list[OaiRecord]]:
    """Yield each page as it arrives, following resumption tokens."""
    params = {"verb": verb, "metadataPrefix": prefix}
    for key, value in (("set", set_spec), ("from", from_), ("until", until)):
        if value:
            params[key] = value
    seen_tokens: set[str] = set()
    first = True
    for _ in range(max_pages):
        records, token = _parse_page(transport.request(endpoint, params), verb, prefix, first)
        first = False
        yield records
        if token is None:
            return
        if token in seen_tokens:
            raise ProtocolError("server repeated a resumption token")
        seen_tokens.add(token)
        params = {"verb": verb, "resumptionToken": token}
    raise ProtocolError(f"gave up after {max_pages} pages")


def harvest(endpoint: str, prefix: str, transport: Transport, **filters) -> list[OaiRecord]:
    out: list[OaiRecord] = []
    seen: set[str] = set()
    for page in harvest_pages(endpoint, prefix, transport, **filters):
        for rec in page:
            if rec.identifier in seen:
                raise ProtocolError(f"record {rec.identifier} delivered twice")
            seen.add(rec.identifier)
            if not rec.deleted:
                out.append(rec)
    return out
