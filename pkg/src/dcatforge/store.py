"""File-backed catalog store.

Layout under the store root::

    index.tsv              append-only: id TAB organization TAB RFC3339 datestamp
    <org>/<id>.rdf         current metadata, RDF/XML
    <org>/<id>.ref         optional payload reference (a single IRI)

Record files are written to a temporary name, fsynced, then renamed, so a
reader never sees a half-written document. The last index line for an id
wins when the index is replayed.
"""

from __future__ import annotations

import hashlib
import os
import re
import threading
from collections.abc import Callable
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .rdf import Graph, RDFError, canonicalize, parse_rdfxml, serialize_rdfxml
from .rdf.terms import is_absolute_iri

INDEX = "index.tsv"
_ORG = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_.\-]*$")
_UUID = re.compile(r"^[0-9a-f]{8}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{12}$")

Clock = Callable[[], datetime]


class StorageError(Exception):
    pass


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


def format_datestamp(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def parse_datestamp(text: str) -> datetime:
    dt = datetime.fromisoformat(text.replace("Z", "+00:00"))
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def _to_second(dt: datetime) -> datetime:
    if dt.tzinfo is None:
        raise ValueError("clock must return timezone-aware datetimes")
    return dt.astimezone(timezone.utc).replace(microsecond=0)


def is_uuid(text: str) -> bool:
    return bool(_UUID.match(text))


@dataclass(frozen=True)
class StoredDataset:
    id: str
    organization: str
    metadata: Graph
    datestamp: datetime
    payload_ref: str | None = None

    def __post_init__(self):
        if not is_uuid(self.id):
            raise ValueError(f"dataset id {self.id!r} is not a lowercase UUID")
        if not _ORG.match(self.organization):
            raise ValueError(f"organization {self.organization!r} is not a safe name")
        if self.payload_ref is not None and not is_absolute_iri(self.payload_ref):
            raise ValueError(f"payload ref {self.payload_ref!r} is not an absolute IRI")

    @property
    def sort_key(self) -> tuple[datetime, str]:
        return (self.datestamp, self.id)


@dataclass(frozen=True)
class StoreSnapshot:
    id: str
    records: tuple[StoredDataset, ...]

    def __len__(self) -> int:
        return len(self.records)

    def get(self, dataset_id: str) -> StoredDataset | None:
        for r in self.records:
            if r.id == dataset_id:
                return r
        return None

    def list(
        self,
        organization: str | None = None,
        from_: datetime | None = None,
        until: datetime | None = None,
    ) -> list[StoredDataset]:
        return [
            r
            for r in self.records
            if (organization is None or r.organization == organization)
            and (from_ is None or r.datestamp >= from_)
            and (until is None or r.datestamp <= until)
        ]

    def organizations(self) -> list[str]:
        return sorted({r.organization for r in self.records})

    @property
    def earliest(self) -> datetime | None:
        return self.records[0].datestamp if self.records else None


def list_records(snapshot: StoreSnapshot, organization=None, from_=None, until=None) -> list[StoredDataset]:
    return snapshot.list(organization, from_, until)


def _fsync_write(path: Path, data: bytes) -> None:
    tmp = path.with_name(f".{path.name}.{os.getpid()}.{threading.get_ident()}.tmp")
    with open(tmp, "wb") as fh:
        fh.write(data)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


class CatalogStore:
    """Single writer, many readers. Readers should work from ``snapshot()``."""

    def __init__(self, root: str | Path, clock: Clock | None = None):
        self.root = Path(root)
        self.clock = clock or utc_now
        self._lock = threading.Lock()
        self._records: dict[str, StoredDataset] = {}
        self._digests: dict[str, str] = {}
        self._snapshot: StoreSnapshot | None = None
        try:
            self.root.mkdir(parents=True, exist_ok=True)
            self._load()
        except (OSError, RDFError, ValueError) as exc:
            raise StorageError(f"cannot open store at {self.root}: {exc}") from exc

    # -- loading -------------------------------------------------------

    def _load(self) -> None:
        index = self.root / INDEX
        if not index.exists():
            return
        latest: dict[str, tuple[str, datetime]] = {}
        for lineno, line in enumerate(index.read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                # a torn final line from an interrupted append is ignored
                continue
            ds_id, org, stamp = parts
            latest[ds_id] = (org, parse_datestamp(stamp))
        for ds_id, (org, stamp) in latest.items():
            path = self.root / org / f"{ds_id}.rdf"
            if not path.exists():
                continue
            data = path.read_bytes()
            ref_path = path.with_suffix(".ref")
            ref = ref_path.read_text(encoding="utf-8").strip() if ref_path.exists() else None
            graph = canonicalize(parse_rdfxml(data.decode("utf-8")))
            self._records[ds_id] = StoredDataset(ds_id, org, graph, stamp, ref or None)
            self._digests[ds_id] = hashlib.sha256(data).hexdigest()

    # -- writing -------------------------------------------------------

    def put(
        self,
        dataset_id: str,
        organization: str,
        metadata: Graph,
        payload_ref: str | None = None,
    ) -> str:
        if len(metadata) == 0:
            raise StorageError(f"refusing to store empty metadata for {dataset_id}")
        with self._lock:
            previous = self._records.get(dataset_id)
            stamp = _to_second(self.clock())
            if previous is not None and stamp < previous.datestamp:
                stamp = previous.datestamp
            try:
                record = StoredDataset(dataset_id, organization, canonicalize(metadata), stamp, payload_ref)
            except ValueError as exc:
                raise StorageError(str(exc)) from exc
            try:
                data = serialize_rdfxml(record.metadata).encode("utf-8")
                folder = self.root / organization
                folder.mkdir(exist_ok=True)
                target = folder / f"{dataset_id}.rdf"
                _fsync_write(target, data)
                ref_path = target.with_suffix(".ref")
                if payload_ref is not None:
                    _fsync_write(ref_path, (payload_ref + "\n").encode("utf-8"))
                elif ref_path.exists():
                    ref_path.unlink()
                with open(self.root / INDEX, "a", encoding="utf-8") as fh:
                    fh.write(f"{dataset_id}\t{organization}\t{format_datestamp(stamp)}\n")
                    fh.flush()
                    os.fsync(fh.fileno())
                if previous is not None and previous.organization != organization:
                    old = self.root / previous.organization / f"{dataset_id}.rdf"
                    old.unlink(missing_ok=True)
                    old.with_suffix(".ref").unlink(missing_ok=True)
            except (OSError, ValueError) as exc:
                raise StorageError(f"cannot write {dataset_id}: {exc}") from exc
            self._records[dataset_id] = record
            self._digests[dataset_id] = hashlib.sha256(data).hexdigest()
            self._snapshot = None
        return dataset_id

    # -- reading -------------------------------------------------------

    def get(self, dataset_id: str) -> StoredDataset | None:
        return self._records.get(dataset_id)

    def __len__(self) -> int:
        return len(self._records)

    def snapshot(self) -> StoreSnapshot:
        with self._lock:
            if self._snapshot is None:
                records = tuple(sorted(self._records.values(), key=lambda r: r.sort_key))
                h = hashlib.sha256()
                for r in records:
                    h.update(f"{r.id}\t{r.organization}\t{format_datestamp(r.datestamp)}\t".encode())
                    h.update(f"{self._digests[r.id]}\t{r.payload_ref or ''}\n".encode())
                self._snapshot = StoreSnapshot(h.hexdigest()[:16], records)
            return self._snapshot
