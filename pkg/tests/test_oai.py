import math
import uuid
from datetime import datetime, timedelta, timezone
from urllib.request import urlopen

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dcatforge.oai import (
    ERROR_CODES, HttpTransport, LoopbackTransport, OaiConfig, OaiRequest, ProtocolError, Repository,
    ResumptionToken, TokenError, TransportError, decode_token, encode_token, handle_request, harvest,
    harvest_pages, make_server, serve_in_thread,
)
from dcatforge.oai.server import OaiError, parse_oai_date
from dcatforge.rdf import DCAT, DCT, RDF_TYPE, Graph, IRI, Literal, Triple, graph_isomorphic
from dcatforge.store import CatalogStore, StoreSnapshot, StoredDataset
from dcatforge.synthetic import random_dcat_graph

from oai_grammar import Invalid, error_codes, validate_response

T0 = datetime(2022, 10, 30, 10, 5, 26, tzinfo=timezone.utc)
SECRET = b"test-secret"
CFG = OaiConfig(page_size=100, secret=SECRET, base_url="http://localhost/oai")
EP = "loopback"


def clock():
    return T0


def _uuid(i):
    return str(uuid.uuid5(uuid.NAMESPACE_URL, f"rec-{i}"))


def _tiny_graph(i):
    ds = IRI(f"https://portal.example.org/dataset/{_uuid(i)}")
    return Graph([Triple(ds, RDF_TYPE, DCAT.Dataset), Triple(ds, DCT.title, Literal(f"record {i}"))])


def _snapshot(stamps_orgs):
    recs = [StoredDataset(_uuid(i), org, _tiny_graph(i), stamp) for i, (stamp, org) in enumerate(stamps_orgs)]
    recs.sort(key=lambda r: r.sort_key)
    return StoreSnapshot(f"snap{len(recs)}", tuple(recs))


@pytest.fixture
def small_store(tmp_path):
    store = CatalogStore(tmp_path, clock=clock)
    for i in range(5):
        store.put(_uuid(i), "aemet" if i < 3 else "ceimoncloa", random_dcat_graph(i))
    return store


def _ask(repo, cfg=CFG, **params):
    resp = handle_request(repo, params, cfg, clock)
    return resp, validate_response(resp.body)


# -- tokens ------------------------------------------------------------------------


def test_token_round_trip():
    tok = ResumptionToken("ListRecords", "abc", 100, T0, "dcat_ap", "2022-01-01", "", "aemet")
    text = encode_token(tok, SECRET)
    assert decode_token(text, SECRET) == tok
    assert all(c.isalnum() or c in "-_.=" for c in text)


def test_token_tamper_detected():
    text = encode_token(ResumptionToken("ListRecords", "abc", 100, T0, "dcat_ap", "", "", ""), SECRET)
    with pytest.raises(TokenError):
        decode_token(text, b"other-secret")
    body, mac = text.rsplit(".", 1)
    with pytest.raises(TokenError):
        decode_token(body[:-2] + "AA." + mac, SECRET)
    with pytest.raises(TokenError):
        decode_token("garbage", SECRET)


@settings(max_examples=50)
@given(st.sampled_from(["ListRecords", "ListIdentifiers"]), st.integers(0, 10**6),
       st.text(alphabet="abc:-_", max_size=10), st.sampled_from(["", "2022-10-30", "2022-10-30T10:05:26Z"]))
def test_token_round_trip_property(verb, cursor, set_spec, date):
    tok = ResumptionToken(verb, "s" * 16, cursor, T0, "oai_dc", date, date, set_spec)
    assert decode_token(encode_token(tok, SECRET), SECRET) == tok


# -- verbs -------------------------------------------------------------------------


def test_identify(small_store):
    _, root = _ask(small_store, verb="Identify")
    assert root.findtext("{http://www.openarchives.org/OAI/2.0/}Identify/"
                         "{http://www.openarchives.org/OAI/2.0/}earliestDatestamp") == "2022-10-30T10:05:26Z"


def test_list_metadata_formats_and_sets(small_store):
    _, root = _ask(small_store, verb="ListMetadataFormats")
    assert b"dcat_ap" in handle_request(small_store, {"verb": "ListMetadataFormats"}, CFG, clock).body
    resp, _ = _ask(small_store, verb="ListSets")
    assert b"<setSpec>aemet</setSpec>" in resp.body and b"<setSpec>ceimoncloa</setSpec>" in resp.body


def test_get_record_both_formats(small_store):
    ident = "oai:dcatforge:" + _uuid(1)
    for prefix in ("dcat_ap", "oai_dc"):
        resp, _ = _ask(small_store, verb="GetRecord", identifier=ident, metadataPrefix=prefix)
        assert not resp.errors


def test_list_by_set(small_store):
    got = harvest(EP, "dcat_ap", LoopbackTransport(Repository(small_store), CFG, clock), set_spec="ceimoncloa")
    assert {r.identifier for r in got} == {"oai:dcatforge:" + _uuid(i) for i in (3, 4)}
    for r in got:
        assert graph_isomorphic(r.metadata, small_store.get(r.identifier.rsplit(":", 1)[1]).metadata)


def test_list_identifiers(small_store):
    got = harvest(EP, "oai_dc", LoopbackTransport(Repository(small_store), CFG, clock), verb="ListIdentifiers")
    assert len(got) == 5 and all(r.metadata is None for r in got)


def test_empty_repository(tmp_path):
    empty = CatalogStore(tmp_path)
    assert _ask(empty, verb="ListSets")[0].errors == ("noSetHierarchy",)
    assert _ask(empty, verb="ListRecords", metadataPrefix="dcat_ap")[0].errors == ("noRecordsMatch",)
    assert harvest(EP, "dcat_ap", LoopbackTransport(Repository(empty), CFG, clock)) == []
    _ask(empty, verb="Identify")


# -- errors ------------------------------------------------------------------------

ERROR_REQUESTS = {
    "badVerb": {"verb": "Harvest"},
    "badArgument": {"verb": "ListRecords"},
    "badResumptionToken": {"verb": "ListRecords", "resumptionToken": "not-a-token"},
    "cannotDisseminateFormat": {"verb": "ListRecords", "metadataPrefix": "marc21"},
    "idDoesNotExist": {"verb": "GetRecord", "identifier": "oai:dcatforge:nope", "metadataPrefix": "dcat_ap"},
    "noRecordsMatch": {"verb": "ListRecords", "metadataPrefix": "dcat_ap", "from": "2099-01-01"},
}


@pytest.mark.parametrize("code", sorted(ERROR_REQUESTS))
def test_error_codes(small_store, code):
    resp, root = _ask(small_store, **ERROR_REQUESTS[code])
    assert resp.status == 200
    assert error_codes(root) == [code] and resp.errors == (code,)
    request = root[1]
    if code in ("badVerb", "badArgument"):
        assert request.attrib == {}


@pytest.mark.parametrize("params", [
    {},
    {"verb": "Identify", "extra": "1"},
    {"verb": "ListRecords", "metadataPrefix": "dcat_ap", "from": "30/10/2022"},
    {"verb": "ListRecords", "metadataPrefix": "dcat_ap", "from": "2022-10-30", "until": "2022-10-30T00:00:00Z"},
    {"verb": "ListRecords", "metadataPrefix": "dcat_ap", "from": "2022-10-31", "until": "2022-10-30"},
    {"verb": "ListRecords", "metadataPrefix": "dcat_ap", "resumptionToken": "x"},
    {"verb": "GetRecord", "resumptionToken": "x"},
    {"verb": ["ListSets", "ListSets"]},
    {"verb": "ListSets", "set": ["a", "b"]},
])
def test_malformed_requests_rejected(small_store, params):
    resp, _ = _ask(small_store, **params)
    assert resp.errors and resp.errors[0] in ("badVerb", "badArgument")


def test_all_declared_codes_are_schema_codes():
    from oai_grammar import ERROR_CODES as SCHEMA_CODES
    assert set(ERROR_CODES) == set(SCHEMA_CODES)


def test_validator_rejects_broken_documents():
    with pytest.raises(Invalid):
        validate_response(b"<notoai/>")
    good = handle_request(_snapshot([]), {"verb": "Identify"}, CFG, clock).xml
    with pytest.raises(Invalid):
        validate_response(good.replace("<protocolVersion>2.0", "<protocolVersion>1.1"))
    with pytest.raises(Invalid):
        validate_response(good.replace("<baseURL>", "<extra/><baseURL>"))


def test_request_parsing():
    req = OaiRequest.from_params({"verb": ["ListSets"], "set": "a"})
    assert req.verb == "ListSets" and req.arguments == {"set": "a"}
    with pytest.raises(OaiError):
        OaiRequest.from_params({"verb": ["a", "b"]})


def test_oai_dates():
    assert parse_oai_date("2022-10-30", upper=True)[0] == datetime(2022, 10, 30, 23, 59, 59, tzinfo=timezone.utc)
    assert parse_oai_date("2022-10-30T10:05:26Z", upper=False) == (T0, "second")
    for bad in ("2022-13-01", "2022-10-30T10:05:26", "2022-10-30T10:05:26+01:00"):
        with pytest.raises(OaiError):
            parse_oai_date(bad, upper=False)


# -- pagination ----------------------------------------------------------------------


def test_token_expiry(small_store):
    cfg = OaiConfig(page_size=2, secret=SECRET, token_ttl_seconds=60)
    resp = handle_request(small_store, {"verb": "ListIdentifiers", "metadataPrefix": "dcat_ap"}, cfg, clock)
    token = validate_response(resp.body).find(".//{http://www.openarchives.org/OAI/2.0/}resumptionToken").text
    repo = Repository(small_store)
    handle_request(repo, {"verb": "ListIdentifiers", "metadataPrefix": "dcat_ap"}, cfg, clock)
    later = handle_request(repo, {"verb": "ListIdentifiers", "resumptionToken": token}, cfg,
                           lambda: T0 + timedelta(seconds=61))
    assert later.errors == ("badResumptionToken",)
    wrong_verb = handle_request(repo, {"verb": "ListRecords", "resumptionToken": token}, cfg, clock)
    assert wrong_verb.errors == ("badResumptionToken",)


def test_harvest_pinned_to_snapshot(tmp_path):
    t = {"now": T0}
    store = CatalogStore(tmp_path, clock=lambda: t["now"])
    for i in range(10):
        store.put(_uuid(i), "aemet", _tiny_graph(i))
    before = store.snapshot()
    cfg = OaiConfig(page_size=3, secret=SECRET)
    pages = harvest_pages(EP, "dcat_ap", LoopbackTransport(Repository(store, 16), cfg, clock))
    got = list(next(pages))
    t["now"] = T0 + timedelta(seconds=5)
    store.put(_uuid(99), "aemet", _tiny_graph(99))  # lands mid-harvest
    for page in pages:
        got += page
    assert [r.identifier.rsplit(":", 1)[1] for r in got] == [r.id for r in before.records]


def test_evicted_snapshot_token(tmp_path):
    t = {"now": T0}
    store = CatalogStore(tmp_path, clock=lambda: t["now"])
    for i in range(4):
        store.put(_uuid(i), "aemet", _tiny_graph(i))
    cfg = OaiConfig(page_size=2, secret=SECRET, retained_snapshots=1)
    repo = Repository(store, cfg.retained_snapshots)
    pages = harvest_pages(EP, "dcat_ap", LoopbackTransport(repo, cfg, clock))
    next(pages)
    t["now"] = T0 + timedelta(seconds=1)
    store.put(_uuid(50), "aemet", _tiny_graph(50))
    repo.current()  # a newer snapshot pushes the old one out
    with pytest.raises(ProtocolError) as exc:
        next(pages)
    assert exc.value.code == "badResumptionToken"


@st.composite
def pagination_cases(draw):
    n = draw(st.integers(0, 40))
    stamps_orgs = [(T0 + timedelta(hours=draw(st.integers(0, 96))), draw(st.sampled_from(["a", "b", "c"])))
                   for _ in range(n)]
    page_size = draw(st.sampled_from([1, 7, 100]))
    set_spec = draw(st.sampled_from([None, "a", "b"]))
    days = draw(st.one_of(st.none(), st.tuples(st.integers(0, 4), st.integers(0, 4)).map(sorted)))
    return stamps_orgs, page_size, set_spec, days


def check_pagination(stamps_orgs, page_size, set_spec, days):
    snap = _snapshot(stamps_orgs)
    cfg = OaiConfig(page_size=page_size, secret=SECRET)
    transport = LoopbackTransport(Repository(snap), cfg, clock)
    filters = {"set_spec": set_spec}
    lo = hi = None
    if days:
        d0, d1 = (T0.date() + timedelta(days=d) for d in days)
        filters.update(from_=d0.isoformat(), until=d1.isoformat())
        lo = datetime(d0.year, d0.month, d0.day, tzinfo=timezone.utc)
        hi = datetime(d1.year, d1.month, d1.day, 23, 59, 59, tzinfo=timezone.utc)
    pages = list(harvest_pages(EP, "dcat_ap", transport, **filters))
    expected = [r.id for r in snap.list(set_spec, lo, hi)]
    got = [r.identifier.rsplit(":", 1)[1] for p in pages for r in p]
    assert got == expected
    assert len(got) == len(set(got))
    assert len(pages) == max(1, math.ceil(len(expected) / page_size))
    assert all(len(p) == page_size for p in pages[:-1])


@settings(max_examples=50)
@given(pagination_cases())
def test_pagination_soundness(case):
    check_pagination(*case)


# -- transport ---------------------------------------------------------------------


def test_http_server_round_trip(small_store):
    server = make_server(Repository(small_store), OaiConfig(page_size=2, secret=SECRET), clock=clock)
    serve_in_thread(server)
    try:
        got = harvest(server.url, "dcat_ap", HttpTransport(5))
        assert len(got) == 5
        with urlopen(server.url + "?verb=Identify", timeout=5) as resp:
            body = resp.read()
            assert resp.headers["Content-Type"].startswith("text/xml")
        root = validate_response(body)
        assert root.findtext(".//{http://www.openarchives.org/OAI/2.0/}baseURL") == server.url
        from urllib.request import Request
        post = Request(server.url, data=b"verb=ListSets", method="POST",
                       headers={"Content-Type": "application/x-www-form-urlencoded"})
        with urlopen(post, timeout=5) as resp:
            assert b"<setSpec>aemet</setSpec>" in resp.read()
    finally:
        server.shutdown()
        server.server_close()


def test_transport_failure():
    with pytest.raises(TransportError):
        harvest("http://127.0.0.1:1/oai", "dcat_ap", HttpTransport(1))


def test_protocol_failure_is_all_or_nothing(small_store):
    class Truncating(LoopbackTransport):
        def request(self, endpoint, params):
            body = super().request(endpoint, params)
            return body if self.requests == 1 else body[: len(body) // 2]

    cfg = OaiConfig(page_size=2, secret=SECRET)
    with pytest.raises(ProtocolError):
        harvest(EP, "dcat_ap", Truncating(Repository(small_store), cfg, clock))
