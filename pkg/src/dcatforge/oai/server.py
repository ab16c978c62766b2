"""OAI-PMH v2 request handling over catalog store snapshots.

Protocol errors are answered in-band. Every response is built from the
snapshot current at the time of the first request of a list sequence;
resumption tokens carry that snapshot's id, and the repository keeps a
bounded history of recent snapshots so a harvest in progress stays
consistent while the store changes.
"""

from __future__ import annotations

import re
import threading
from collections import OrderedDict
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone

from ..clock import Clock, system_clock
from ..rdf import DCAT, DCT, IRI, Literal, serialize_rdfxml
from ..store import CatalogStore, StoredDataset, StoreSnapshot, format_datestamp, is_uuid
from .token import ResumptionToken, TokenError, decode_token, encode_token

OAI_NS = "http://www.openarchives.org/OAI/2.0/"
XSI_NS = "http://www.w3.org/2001/XMLSchema-instance"
OAI_SCHEMA = "http://www.openarchives.org/OAI/2.0/OAI-PMH.xsd"
OAI_DC_NS = "http://www.openarchives.org/OAI/2.0/oai_dc/"
DC_NS = "http://purl.org/dc/elements/1.1/"

ERROR_CODES = (
    "badArgument", "badResumptionToken", "badVerb", "cannotDisseminateFormat", "idDoesNotExist",
    "noRecordsMatch", "noMetadataFormats", "noSetHierarchy",
)

# verb -> (required, optional); resumptionToken is handled separately
VERBS: dict[str, tuple[frozenset[str], frozenset[str]]] = {
    "Identify": (frozenset(), frozenset()),
    "ListMetadataFormats": (frozenset(), frozenset({"identifier"})),
    "ListSets": (frozenset(), frozenset()),
    "ListIdentifiers": (frozenset({"metadataPrefix"}), frozenset({"from", "until", "set"})),
    "ListRecords": (frozenset({"metadataPrefix"}), frozenset({"from", "until", "set"})),
    "GetRecord": (frozenset({"identifier", "metadataPrefix"}), frozenset()),
}
_RESUMABLE = {"ListSets", "ListIdentifiers", "ListRecords"}


@dataclass(frozen=True)
class MetadataFormat:
    prefix: str
    schema: str
    namespace: str


METADATA_FORMATS = {
    "dcat_ap": MetadataFormat(
        "dcat_ap", "https://semiceu.github.io/DCAT-AP/releases/2.1.0/dcat-ap_2.1.0.rdf", "http://data.europa.eu/r5r/"
    ),
    "oai_dc": MetadataFormat("oai_dc", "http://www.openarchives.org/OAI/2.0/oai_dc.xsd", OAI_DC_NS),
}


@dataclass(frozen=True)
class OaiConfig:
    repository_name: str = "dcatforge catalog"
    base_url: str = "http://localhost:8080/oai"
    admin_email: str = "admin@localhost"
    page_size: int = 100
    token_ttl_seconds: int = 3600
    secret: bytes = b"dcatforge-resumption"
    identifier_prefix: str = "oai:dcatforge:"
    retained_snapshots: int = 16

    def __post_init__(self):
        if self.page_size < 1:
            raise ValueError("page_size must be at least 1")
        if self.token_ttl_seconds <= 0:
            raise ValueError("token_ttl_seconds must be positive")


class Repository:
    """Serves the store's current snapshot and remembers recent ones."""

    def __init__(self, source: CatalogStore | StoreSnapshot, retain: int = 16):
        self._source = source
        self._retain = max(1, retain)
        self._history: OrderedDict[str, StoreSnapshot] = OrderedDict()
        self._lock = threading.Lock()

    def current(self) -> StoreSnapshot:
        snap = self._source if isinstance(self._source, StoreSnapshot) else self._source.snapshot()
        with self._lock:
            self._history[snap.id] = snap
            self._history.move_to_end(snap.id)
            while len(self._history) > self._retain:
                self._history.popitem(last=False)
        return snap

    def lookup(self, snapshot_id: str) -> StoreSnapshot | None:
        with self._lock:
            return self._history.get(snapshot_id)


class OaiError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message


@dataclass(frozen=True)
class OaiRequest:
    verb: str | None
    arguments: Mapping[str, str] = field(default_factory=dict)

    @classmethod
    def from_params(cls, params: Mapping[str, str | Sequence[str]]) -> OaiRequest:
        """Flatten query parameters; a repeated argument is a protocol error."""
        flat: dict[str, str] = {}
        for key, value in params.items():
            values = [value] if isinstance(value, str) else list(value)
            if len(values) != 1:
                raise OaiError("badArgument" if key != "verb" else "badVerb", f"argument {key!r} is repeated")
            flat[key] = values[0]
        verb = flat.pop("verb", None)
        return cls(verb, flat)


@dataclass(frozen=True)
class OaiResponse:
    xml: str
    errors: tuple[str, ...] = ()
    status: int = 200
    content_type: str = "text/xml; charset=utf-8"

    @property
    def body(self) -> bytes:
        return self.xml.encode("utf-8")


# -- XML helpers -----------------------------------------------------------

_INVALID_XML = re.compile("[^\t\n\r\x20-\ud7ff\ue000-\ufffd\U00010000-\U0010ffff]")


def _clean(value: str) -> str:
    return _INVALID_XML.sub("\ufffd", value)


def esc(value: str) -> str:
    return _clean(value).replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace("\r", "&#13;")


def esc_attr(value: str) -> str:
    return (
        esc(value).replace('"', "&quot;").replace("\n", "&#10;").replace("\t", "&#9;")
    )


def _strip_declaration(xml: str) -> str:
    return xml.split("?>", 1)[1].lstrip("\n") if xml.startswith("<?xml") else xml


# -- dates -----------------------------------------------------------------

_DAY = re.compile(r"^\d{4}-\d{2}-\d{2}$")
_SECOND = re.compile(r"^\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}Z$")


def parse_oai_date(text: str, upper: bool) -> tuple[datetime, str]:
    """(instant, granularity). A day-granular ``until`` covers the whole day."""
    try:
        if _DAY.match(text):
            dt = datetime.strptime(text, "%Y-%m-%d").replace(tzinfo=timezone.utc)
            return (dt + timedelta(days=1, seconds=-1) if upper else dt), "day"
        if _SECOND.match(text):
            return datetime.strptime(text, "%Y-%m-%dT%H:%M:%SZ").replace(tzinfo=timezone.utc), "second"
    except ValueError:
        pass
    raise OaiError("badArgument", f"{text!r} is not a valid OAI-PMH date")


# -- handler ---------------------------------------------------------------


class _Handler:
    def __init__(self, repo: Repository, cfg: OaiConfig, now: datetime):
        self.repo = repo
        self.cfg = cfg
        self.now = now

    def oai_id(self, record: StoredDataset) -> str:
        return self.cfg.identifier_prefix + record.id

    def find(self, snap: StoreSnapshot, identifier: str) -> StoredDataset:
        local = identifier[len(self.cfg.identifier_prefix):] if identifier.startswith(self.cfg.identifier_prefix) else ""
        record = snap.get(local) if is_uuid(local) else None
        if record is None:
            raise OaiError("idDoesNotExist", f"no record with identifier {identifier!r}")
        return record

    def check_format(self, prefix: str) -> MetadataFormat:
        try:
            return METADATA_FORMATS[prefix]
        except KeyError:
            raise OaiError("cannotDisseminateFormat", f"metadata format {prefix!r} is not supported") from None

    # verbs

    def identify(self, args) -> str:
        earliest = self.repo.current().earliest
        stamp = format_datestamp(earliest) if earliest else "1970-01-01T00:00:00Z"
        return (
            "<Identify>"
            f"<repositoryName>{esc(self.cfg.repository_name)}</repositoryName>"
            f"<baseURL>{esc(self.cfg.base_url)}</baseURL>"
            "<protocolVersion>2.0</protocolVersion>"
            f"<adminEmail>{esc(self.cfg.admin_email)}</adminEmail>"
            f"<earliestDatestamp>{stamp}</earliestDatestamp>"
            "<deletedRecord>no</deletedRecord>"
            "<granularity>YYYY-MM-DDThh:mm:ssZ</granularity>"
            "</Identify>"
        )

    def list_metadata_formats(self, args) -> str:
        if "identifier" in args:
            self.find(self.repo.current(), args["identifier"])
        parts = [
            "<metadataFormat>"
            f"<metadataPrefix>{f.prefix}</metadataPrefix><schema>{esc(f.schema)}</schema>"
            f"<metadataNamespace>{esc(f.namespace)}</metadataNamespace>"
            "</metadataFormat>"
            for f in METADATA_FORMATS.values()
        ]
        return "<ListMetadataFormats>" + "".join(parts) + "</ListMetadataFormats>"

    def list_sets(self, args) -> str:
        if "resumptionToken" in args:
            raise OaiError("badResumptionToken", "this repository never issues ListSets tokens")
        orgs = self.repo.current().organizations()
        if not orgs:
            raise OaiError("noSetHierarchy", "the repository holds no sets")
        sets = "".join(f"<set><setSpec>{esc(o)}</setSpec><setName>{esc(o)}</setName></set>" for o in orgs)
        return f"<ListSets>{sets}</ListSets>"

    def get_record(self, args) -> str:
        self.check_format(args["metadataPrefix"])
        record = self.find(self.repo.current(), args["identifier"])
        return f"<GetRecord>{self.record_xml(record, args['metadataPrefix'])}</GetRecord>"

    def list_items(self, verb: str, args) -> str:
        if "resumptionToken" in args:
            tok = self.resume(verb, args["resumptionToken"])
            snap = self.repo.lookup(tok.snapshot)
            if snap is None:
                raise OaiError("badResumptionToken", "the snapshot behind this token is no longer available")
            prefix, from_s, until_s, set_spec, cursor = tok.prefix, tok.from_, tok.until, tok.set, tok.cursor
        else:
            prefix = args["metadataPrefix"]
            from_s, until_s, set_spec = args.get("from", ""), args.get("until", ""), args.get("set", "")
            snap, cursor = self.repo.current(), 0
        self.check_format(prefix)
        lo = hi = None
        grains = set()
        if from_s:
            lo, g = parse_oai_date(from_s, upper=False)
            grains.add(g)
        if until_s:
            hi, g = parse_oai_date(until_s, upper=True)
            grains.add(g)
        if len(grains) > 1:
            raise OaiError("badArgument", "from and until must use the same granularity")
        if lo is not None and hi is not None and lo > hi:
            raise OaiError("badArgument", "from is later than until")
        items = snap.list(set_spec or None, lo, hi)
        if not items:
            if cursor:
                raise OaiError("badResumptionToken", "token points past the end of the list")
            raise OaiError("noRecordsMatch", "no records match the request")
        if cursor >= len(items):
            raise OaiError("badResumptionToken", "token points past the end of the list")
        page = items[cursor: cursor + self.cfg.page_size]
        if verb == "ListRecords":
            body = "".join(self.record_xml(r, prefix) for r in page)
        else:
            body = "".join(self.header_xml(r) for r in page)
        nxt = cursor + len(page)
        if nxt < len(items):
            expiry = (self.now + timedelta(seconds=self.cfg.token_ttl_seconds)).replace(microsecond=0)
            token = encode_token(
                ResumptionToken(verb, snap.id, nxt, expiry, prefix, from_s, until_s, set_spec), self.cfg.secret
            )
            body += (
                f'<resumptionToken expirationDate="{format_datestamp(expiry)}" '
                f'completeListSize="{len(items)}" cursor="{cursor}">{token}</resumptionToken>'
            )
        elif cursor > 0:
            body += f'<resumptionToken completeListSize="{len(items)}" cursor="{cursor}"/>'
        return f"<{verb}>{body}</{verb}>"

    def resume(self, verb: str, text: str) -> ResumptionToken:
        try:
            tok = decode_token(text, self.cfg.secret)
        except TokenError as exc:
            raise OaiError("badResumptionToken", str(exc)) from None
        if tok.verb != verb:
            raise OaiError("badResumptionToken", f"token was issued for {tok.verb}")
        if tok.expiry < self.now:
            raise OaiError("badResumptionToken", "token has expired")
        return tok

    # records

    def header_xml(self, r: StoredDataset) -> str:
        return (
            f"<header><identifier>{esc(self.oai_id(r))}</identifier>"
            f"<datestamp>{format_datestamp(r.datestamp)}</datestamp>"
            f"<setSpec>{esc(r.organization)}</setSpec></header>"
        )

    def record_xml(self, r: StoredDataset, prefix: str) -> str:
        if prefix == "dcat_ap":
            payload = _strip_declaration(serialize_rdfxml(r.metadata)).rstrip("\n")
        else:
            payload = _dublin_core(r)
        return f"<record>{self.header_xml(r)}<metadata>{payload}</metadata></record>"


def _dublin_core(r: StoredDataset) -> str:
    parts = []
    for ds in sorted(s.value for s in r.metadata.subjects_of_type(DCAT.Dataset) if isinstance(s, IRI)):
        parts.append(f"<dc:identifier>{esc(ds)}</dc:identifier>")
    for t in r.metadata.sorted():
        if t.predicate == DCT.title and isinstance(t.object, Literal):
            parts.append(f"<dc:title>{esc(t.object.lexical)}</dc:title>")
        elif t.predicate == DCT.description and isinstance(t.object, Literal):
            parts.append(f"<dc:description>{esc(t.object.lexical)}</dc:description>")
    parts.append(f"<dc:date>{format_datestamp(r.datestamp)}</dc:date>")
    return (
        f'<oai_dc:dc xmlns:oai_dc="{OAI_DC_NS}" xmlns:dc="{DC_NS}" xmlns:xsi="{XSI_NS}" '
        f'xsi:schemaLocation="{OAI_DC_NS} http://www.openarchives.org/OAI/2.0/oai_dc.xsd">'
        + "".join(parts)
        + "</oai_dc:dc>"
    )


def _envelope(cfg: OaiConfig, now: datetime, request_attrs: Mapping[str, str] | None, body: str) -> str:
    attrs = "".join(f' {k}="{esc_attr(v)}"' for k, v in sorted((request_attrs or {}).items()))
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<OAI-PMH xmlns="{OAI_NS}" xmlns:xsi="{XSI_NS}" xsi:schemaLocation="{OAI_NS} {OAI_SCHEMA}">'
        f"<responseDate>{format_datestamp(now)}</responseDate>"
        f"<request{attrs}>{esc(cfg.base_url)}</request>"
        f"{body}</OAI-PMH>\n"
    )


def _validate(req: OaiRequest) -> None:
    if req.verb not in VERBS:
        raise OaiError("badVerb", f"{req.verb!r} is not an OAI-PMH verb" if req.verb else "verb is missing")
    required, optional = VERBS[req.verb]
    args = set(req.arguments)
    if "resumptionToken" in args:
        if req.verb not in _RESUMABLE:
            raise OaiError("badArgument", f"{req.verb} does not take a resumptionToken")
        if args != {"resumptionToken"}:
            raise OaiError("badArgument", "resumptionToken is an exclusive argument")
        return
    illegal = args - required - optional
    if illegal:
        raise OaiError("badArgument", f"illegal arguments for {req.verb}: {', '.join(sorted(illegal))}")
    missing = required - args
    if missing:
        raise OaiError("badArgument", f"missing required arguments: {', '.join(sorted(missing))}")


def handle_request(
    repo: Repository | CatalogStore | StoreSnapshot,
    params: Mapping[str, str | Sequence[str]] | OaiRequest,
    cfg: OaiConfig | None = None,
    clock: Clock = system_clock,
) -> OaiResponse:
    cfg = cfg or OaiConfig()
    if not isinstance(repo, Repository):
        repo = Repository(repo, cfg.retained_snapshots)
    now = clock().astimezone(timezone.utc).replace(microsecond=0)
    echo: Mapping[str, str] | None = None
    try:
        req = params if isinstance(params, OaiRequest) else OaiRequest.from_params(params)
        _validate(req)
        echo = {"verb": req.verb, **req.arguments}  # type: ignore[dict-item]
        h = _Handler(repo, cfg, now)
        args = req.arguments
        if req.verb == "Identify":
            body = h.identify(args)
        elif req.verb == "ListMetadataFormats":
            body = h.list_metadata_formats(args)
        elif req.verb == "ListSets":
            body = h.list_sets(args)
        elif req.verb == "GetRecord":
            body = h.get_record(args)
        else:
            body = h.list_items(req.verb, args)  # type: ignore[arg-type]
    except OaiError as exc:
        # badVerb/badArgument responses must not echo the request's attributes
        attrs = None if exc.code in ("badVerb", "badArgument") else echo
        body = f'<error code="{exc.code}">{esc(exc.message)}</error>'
        return OaiResponse(_envelope(cfg, now, attrs, body), (exc.code,))
    return OaiResponse(_envelope(cfg, now, echo, body))
