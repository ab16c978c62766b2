import uuid
from datetime import datetime, timedelta, timezone

import pytest

from dcatforge.clock import ENV_VAR, clock_from_env, fixed_clock, parse_instant, system_clock
from dcatforge.rdf import graph_isomorphic
from dcatforge.store import (
    CatalogStore, StorageError, StoredDataset, format_datestamp, is_uuid, parse_datestamp,
)
from dcatforge.synthetic import random_dcat_graph

T0 = datetime(2022, 10, 30, 10, 5, 26, tzinfo=timezone.utc)


class Ticker:
    def __init__(self, start=T0, step=timedelta(seconds=1)):
        self.now, self.step = start, step

    def __call__(self):
        t = self.now
        self.now += self.step
        return t


def ids(n):
    return [str(uuid.uuid5(uuid.NAMESPACE_URL, f"test-{i}")) for i in range(n)]


def test_put_get_reopen(tmp_path):
    store = CatalogStore(tmp_path, clock=Ticker())
    (a, b) = ids(2)
    store.put(a, "aemet", random_dcat_graph(1), payload_ref="https://broker.example.org/e/1")
    store.put(b, "ceimoncloa", random_dcat_graph(2))
    snap = store.snapshot()
    again = CatalogStore(tmp_path)
    assert again.snapshot().id == snap.id
    assert again.get(a).payload_ref == "https://broker.example.org/e/1"
    assert graph_isomorphic(again.get(b).metadata, random_dcat_graph(2))
    assert again.snapshot().organizations() == ["aemet", "ceimoncloa"]


def test_snapshot_isolation(tmp_path):
    store = CatalogStore(tmp_path, clock=Ticker())
    a, b = ids(2)
    store.put(a, "aemet", random_dcat_graph(1))
    before = store.snapshot()
    store.put(b, "aemet", random_dcat_graph(2))
    store.put(a, "aemet", random_dcat_graph(3))
    assert len(before) == 1 and graph_isomorphic(before.get(a).metadata, random_dcat_graph(1))
    after = store.snapshot()
    assert after.id != before.id and len(after) == 2


def test_snapshot_cached_until_write(tmp_path):
    store = CatalogStore(tmp_path, clock=Ticker())
    store.put(ids(1)[0], "aemet", random_dcat_graph(1))
    assert store.snapshot() is store.snapshot()


def test_datestamps_never_decrease(tmp_path):
    clock = Ticker(step=timedelta(seconds=-10))
    store = CatalogStore(tmp_path, clock=clock)
    a = ids(1)[0]
    store.put(a, "aemet", random_dcat_graph(1))
    first = store.get(a).datestamp
    store.put(a, "aemet", random_dcat_graph(2))
    assert store.get(a).datestamp == first


def test_datestamps_second_granular(tmp_path):
    store = CatalogStore(tmp_path, clock=lambda: T0 + timedelta(microseconds=999_999))
    a = ids(1)[0]
    store.put(a, "aemet", random_dcat_graph(1))
    assert store.get(a).datestamp == T0


def test_listing_filters(tmp_path):
    store = CatalogStore(tmp_path, clock=Ticker(step=timedelta(hours=1)))
    for i, ds in enumerate(ids(6)):
        store.put(ds, "aemet" if i % 2 else "smartsantander", random_dcat_graph(i))
    snap = store.snapshot()
    stamps = [r.datestamp for r in snap.records]
    assert stamps == sorted(stamps) and snap.earliest == T0
    assert len(snap.list(organization="aemet")) == 3
    assert len(snap.list(from_=T0 + timedelta(hours=2))) == 4
    assert len(snap.list(until=T0 + timedelta(hours=2))) == 3


def test_organization_move(tmp_path):
    store = CatalogStore(tmp_path, clock=Ticker())
    a = ids(1)[0]
    store.put(a, "aemet", random_dcat_graph(1))
    store.put(a, "ceimoncloa", random_dcat_graph(1))
    assert not (tmp_path / "aemet" / f"{a}.rdf").exists()
    assert CatalogStore(tmp_path).get(a).organization == "ceimoncloa"


def test_payload_ref_cleared(tmp_path):
    store = CatalogStore(tmp_path, clock=Ticker())
    a = ids(1)[0]
    store.put(a, "aemet", random_dcat_graph(1), payload_ref="https://x.example.org/")
    store.put(a, "aemet", random_dcat_graph(1))
    assert CatalogStore(tmp_path).get(a).payload_ref is None


def test_rejects_bad_input(tmp_path):
    store = CatalogStore(tmp_path)
    with pytest.raises(StorageError):
        store.put("not-a-uuid", "aemet", random_dcat_graph(1))
    with pytest.raises(StorageError):
        store.put(ids(1)[0], "../escape", random_dcat_graph(1))
    with pytest.raises(StorageError):
        store.put(ids(1)[0], "aemet", random_dcat_graph(1), payload_ref="relative")
    from dcatforge.rdf import Graph
    with pytest.raises(StorageError):
        store.put(ids(1)[0], "aemet", Graph())
    assert len(store) == 0


def test_torn_index_line_ignored(tmp_path):
    store = CatalogStore(tmp_path, clock=Ticker())
    a, b = ids(2)
    store.put(a, "aemet", random_dcat_graph(1))
    with open(tmp_path / "index.tsv", "a") as fh:
        fh.write(f"{b}\taem")  # interrupted append
    assert [r.id for r in CatalogStore(tmp_path).snapshot().records] == [a]


def test_stray_temp_file_ignored(tmp_path):
    store = CatalogStore(tmp_path, clock=Ticker())
    a = ids(1)[0]
    store.put(a, "aemet", random_dcat_graph(1))
    (tmp_path / "aemet" / f".{a}.rdf.123.tmp").write_text("<rdf:RDF half written")
    reopened = CatalogStore(tmp_path)
    assert graph_isomorphic(reopened.get(a).metadata, random_dcat_graph(1))


def test_crash_before_index_append_keeps_whole_graph(tmp_path):
    # the data file is replaced atomically; a crash before the index append leaves a complete graph
    store = CatalogStore(tmp_path, clock=Ticker())
    a = ids(1)[0]
    store.put(a, "aemet", random_dcat_graph(1))
    index = (tmp_path / "index.tsv").read_bytes()
    store.put(a, "aemet", random_dcat_graph(2))
    (tmp_path / "index.tsv").write_bytes(index)
    got = CatalogStore(tmp_path).get(a).metadata
    assert graph_isomorphic(got, random_dcat_graph(2))


def test_corrupt_data_file_is_storage_error(tmp_path):
    store = CatalogStore(tmp_path, clock=Ticker())
    a = ids(1)[0]
    store.put(a, "aemet", random_dcat_graph(1))
    (tmp_path / "aemet" / f"{a}.rdf").write_text("garbage")
    with pytest.raises(StorageError):
        CatalogStore(tmp_path)


def test_no_temp_files_left(tmp_path):
    store = CatalogStore(tmp_path, clock=Ticker())
    for i, ds in enumerate(ids(5)):
        store.put(ds, "aemet", random_dcat_graph(i))
    leftovers = [p for p in tmp_path.rglob("*") if p.name.endswith(".tmp")]
    assert leftovers == []


def test_stored_dataset_validation():
    with pytest.raises(ValueError):
        StoredDataset("ABC", "aemet", random_dcat_graph(1), T0)
    assert is_uuid(ids(1)[0]) and not is_uuid(ids(1)[0].upper())


def test_datestamp_format():
    assert format_datestamp(T0) == "2022-10-30T10:05:26Z"
    assert parse_datestamp("2022-10-30T10:05:26Z") == T0
    # day-granular stamps from other repositories read as midnight UTC
    assert parse_datestamp("2022-10-30") == T0.replace(hour=0, minute=0, second=0)
    with pytest.raises(ValueError):
        parse_datestamp("yesterday")


def test_clock_from_env():
    assert clock_from_env({ENV_VAR: "2022-10-30T10:05:26Z"})() == T0
    assert clock_from_env({}) is system_clock
    assert fixed_clock(T0)() == T0
    assert parse_instant("2022-10-30T12:05:26+02:00") == T0
    with pytest.raises(ValueError):
        parse_instant("2022-10-30T10:05:26")
