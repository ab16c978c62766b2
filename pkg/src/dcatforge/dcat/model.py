"""Typed DCAT-AP views over an RDF graph.

Field values stay RDF terms so datatypes and language tags survive a
round trip. Anything the view does not recognise (extra values, unknown
properties, the descriptions of nested nodes) is kept in ``residue``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

from ..rdf import DCAT, DCT, OWL, RDF_TYPE, BNode, Graph, IRI, Literal, Node, Term, Triple, term_key
from ..rdf.terms import WELL_KNOWN_PREFIXES

_MEDIA_TYPE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9!#$&^_.+\-]*/[A-Za-z0-9][A-Za-z0-9!#$&^_.+\-]*$")
_NON_NEGATIVE = re.compile(r"^\+?\d+(\.0*)?$")
IANA_MEDIA_TYPES = "http://www.iana.org/assignments/media-types/"


class NotADataset(LookupError):
    pass


def media_type_text(term: Term) -> str:
    """``application/json`` for either the literal or the IANA IRI form."""
    if isinstance(term, IRI):
        v = term.value
        return v[len(IANA_MEDIA_TYPES):] if v.startswith(IANA_MEDIA_TYPES) else v
    return str(term)


def _valid_media_type(term: Term) -> bool:
    return isinstance(term, (IRI, Literal)) and bool(_MEDIA_TYPE.match(media_type_text(term)))


def _valid_byte_size(term: Term) -> bool:
    return isinstance(term, Literal) and bool(_NON_NEGATIVE.match(term.lexical.strip()))


@dataclass(frozen=True)
class DcatDistribution:
    id: Node
    access_url: IRI | None = None
    download_url: IRI | None = None
    format: IRI | Literal | None = None
    media_type: IRI | Literal | None = None
    license: Node | None = None
    rights: Term | None = None
    byte_size: Literal | None = None
    typed: bool = True

    def __post_init__(self):
        if self.byte_size is not None and not _valid_byte_size(self.byte_size):
            raise ValueError(f"byteSize must be a non-negative integer, got {self.byte_size!r}")
        if self.media_type is not None and not _valid_media_type(self.media_type):
            raise ValueError(f"mediaType must look like type/subtype, got {self.media_type!r}")

    @property
    def size(self) -> int | None:
        return None if self.byte_size is None else int(float(self.byte_size.lexical))

    def urls(self) -> set[str]:
        return {u.value for u in (self.access_url, self.download_url) if u is not None}


@dataclass(frozen=True)
class DcatDataset:
    id: IRI
    title: Literal | None = None
    description: Literal | None = None
    keywords: tuple[Literal, ...] = ()
    themes: tuple[IRI, ...] = ()
    spatial: Term | None = None
    temporal: Node | None = None
    issued: Literal | None = None
    modified: Literal | None = None
    publisher: Node | None = None
    contact_point: Node | None = None
    access_rights: IRI | None = None
    version_info: Literal | None = None
    landing_page: IRI | None = None
    identifier: Literal | None = None
    distributions: tuple[DcatDistribution, ...] = ()
    residue: Graph = field(default_factory=Graph, compare=True)

    def __post_init__(self):
        if not isinstance(self.id, IRI):
            raise TypeError("dataset id must be an IRI")
        # multi-valued fields are sets in RDF; keep one canonical order
        object.__setattr__(self, "keywords", tuple(sorted(self.keywords, key=term_key)))
        object.__setattr__(self, "themes", tuple(sorted(self.themes, key=term_key)))
        object.__setattr__(self, "distributions", tuple(sorted(self.distributions, key=lambda d: term_key(d.id))))

    def replace(self, **changes) -> DcatDataset:
        return replace(self, **changes)

    def urls(self) -> set[str]:
        out: set[str] = set()
        for d in self.distributions:
            out |= d.urls()
        return out

    def describes(self, node: Term | None) -> bool:
        """Whether ``node`` has at least one outgoing property in this view."""
        if node is None or isinstance(node, Literal):
            return False
        if node == self.id:
            return True
        if any(d.id == node for d in self.distributions):
            return True
        return any(t.subject == node for t in self.residue)


# predicate, attribute, accepted term kinds, multi-valued
_DATASET_FIELDS: list[tuple[IRI, str, tuple[type, ...], bool]] = [
    (DCT.title, "title", (Literal,), False),
    (DCT.description, "description", (Literal,), False),
    (DCAT.keyword, "keywords", (Literal,), True),
    (DCAT.theme, "themes", (IRI,), True),
    (DCT.spatial, "spatial", (IRI, BNode, Literal), False),
    (DCT.temporal, "temporal", (IRI, BNode), False),
    (DCT.issued, "issued", (Literal,), False),
    (DCT.modified, "modified", (Literal,), False),
    (DCT.publisher, "publisher", (IRI, BNode), False),
    (DCAT.contactPoint, "contact_point", (IRI, BNode), False),
    (DCT.accessRights, "access_rights", (IRI,), False),
    (OWL.versionInfo, "version_info", (Literal,), False),
    (DCAT.landingPage, "landing_page", (IRI,), False),
    (DCT.identifier, "identifier", (Literal,), False),
]

_DISTRIBUTION_FIELDS: list[tuple[IRI, str, tuple[type, ...], object]] = [
    (DCAT.accessURL, "access_url", (IRI,), None),
    (DCAT.downloadURL, "download_url", (IRI,), None),
    (DCT.format, "format", (IRI, Literal), None),
    (DCAT.mediaType, "media_type", (IRI, Literal), _valid_media_type),
    (DCT.license, "license", (IRI, BNode), None),
    (DCT.rights, "rights", (IRI, BNode, Literal), None),
    (DCAT.byteSize, "byte_size", (Literal,), _valid_byte_size),
]


def _pick(triples: list[Triple], kinds: tuple[type, ...], check=None) -> Triple | None:
    for t in sorted(triples, key=Triple.sort_key):
        if isinstance(t.object, kinds) and (check is None or check(t.object)):
            return t
    return None


def dataset_from_graph(graph: Graph, subject: IRI) -> DcatDataset:
    if Triple(subject, RDF_TYPE, DCAT.Dataset) not in graph:
        raise NotADataset(f"{subject.value} is not typed dcat:Dataset")
    rooted = graph.rooted_at(subject)
    consumed: set[Triple] = {Triple(subject, RDF_TYPE, DCAT.Dataset)}
    own = rooted.about(subject)
    values: dict[str, object] = {}

    for predicate, name, kinds, multi in _DATASET_FIELDS:
        matching = [t for t in own if t.predicate == predicate]
        if multi:
            chosen = sorted((t for t in matching if isinstance(t.object, kinds)), key=Triple.sort_key)
            values[name] = tuple(t.object for t in chosen)
            consumed.update(chosen)
        else:
            t = _pick(matching, kinds)
            if t is not None:
                values[name] = t.object
                consumed.add(t)

    distributions = []
    dist_links = sorted(
        (t for t in own if t.predicate == DCAT.distribution and isinstance(t.object, (IRI, BNode))),
        key=Triple.sort_key,
    )
    for link in dist_links:
        node = link.object
        if node == subject:
            continue
        consumed.add(link)
        dist_triples = rooted.about(node)  # type: ignore[arg-type]
        kwargs: dict[str, object] = {}
        type_triple = Triple(node, RDF_TYPE, DCAT.Distribution)  # type: ignore[arg-type]
        kwargs["typed"] = type_triple in rooted
        if kwargs["typed"]:
            consumed.add(type_triple)
        for predicate, name, kinds, check in _DISTRIBUTION_FIELDS:
            t = _pick([x for x in dist_triples if x.predicate == predicate], kinds, check)
            if t is not None:
                kwargs[name] = t.object
                consumed.add(t)
        distributions.append(DcatDistribution(node, **kwargs))  # type: ignore[arg-type]

    residue = Graph((t for t in rooted if t not in consumed), graph.prefixes)
    return DcatDataset(subject, distributions=tuple(distributions), residue=residue, **values)  # type: ignore[arg-type]


def dataset_to_graph(dataset: DcatDataset) -> Graph:
    s = dataset.id
    out: list[Triple] = [Triple(s, RDF_TYPE, DCAT.Dataset)]
    for predicate, name, _kinds, multi in _DATASET_FIELDS:
        value = getattr(dataset, name)
        if multi:
            out.extend(Triple(s, predicate, v) for v in value)
        elif value is not None:
            out.append(Triple(s, predicate, value))
    for dist in dataset.distributions:
        out.append(Triple(s, DCAT.distribution, dist.id))
        if dist.typed:
            out.append(Triple(dist.id, RDF_TYPE, DCAT.Distribution))
        for predicate, name, _kinds, _check in _DISTRIBUTION_FIELDS:
            value = getattr(dist, name)
            if value is not None:
                out.append(Triple(dist.id, predicate, value))
    out.extend(dataset.residue)
    prefixes = {k: WELL_KNOWN_PREFIXES[k] for k in ("dcat", "dct", "foaf", "owl", "rdf", "skos", "vcard", "xsd")}
    prefixes.update(dataset.residue.prefixes)
    return Graph(out, prefixes)


def datasets_in(graph: Graph) -> list[IRI]:
    return [s for s in graph.subjects_of_type(DCAT.Dataset) if isinstance(s, IRI)]

