from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from types import MappingProxyType

from .terms import IRI, BNode, Literal, Node, Term, term_key


@dataclass(frozen=True, slots=True)
class Triple:
    subject: Node
    predicate: IRI
    object: Term

    def __post_init__(self):
        if not isinstance(self.subject, (IRI, BNode)):
            raise TypeError(f"subject must be an IRI or blank node, got {self.subject!r}")
        if not isinstance(self.predicate, IRI):
            raise TypeError(f"predicate must be an IRI, got {self.predicate!r}")
        if not isinstance(self.object, (IRI, BNode, Literal)):
            raise TypeError(f"object must be an RDF term, got {self.object!r}")

    def sort_key(self) -> tuple:
        return (term_key(self.subject), term_key(self.predicate), term_key(self.object))


class Graph:
    """Immutable set of triples plus a prefix table.

    Operations that "modify" a graph return a new one.
    """

    __slots__ = ("_triples", "_prefixes", "_by_subject")

    def __init__(self, triples: Iterable[Triple] = (), prefixes: Mapping[str, str] | None = None):
        self._triples = frozenset(triples)
        for t in self._triples:
            if not isinstance(t, Triple):
                raise TypeError(f"not a Triple: {t!r}")
        prefixes = dict(prefixes or {})
        for prefix, iri in prefixes.items():
            if not iri:
                raise ValueError(f"prefix {prefix!r} maps to an empty IRI")
        self._prefixes = MappingProxyType(prefixes)
        self._by_subject: dict[Node, list[Triple]] | None = None

    @property
    def triples(self) -> frozenset[Triple]:
        return self._triples

    @property
    def prefixes(self) -> Mapping[str, str]:
        return self._prefixes

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __contains__(self, triple: object) -> bool:
        return triple in self._triples

    def __eq__(self, other: object) -> bool:
        # prefixes are presentation only
        if not isinstance(other, Graph):
            return NotImplemented
        return self._triples == other._triples

    def __hash__(self) -> int:
        return hash(self._triples)

    def __repr__(self) -> str:
        return f"<Graph with {len(self)} triples>"

    def _index(self) -> dict[Node, list[Triple]]:
        if self._by_subject is None:
            index: dict[Node, list[Triple]] = {}
            for t in self._triples:
                index.setdefault(t.subject, []).append(t)
            self._by_subject = index
        return self._by_subject

    def sorted(self) -> list[Triple]:
        return sorted(self._triples, key=Triple.sort_key)

    def about(self, subject: Node) -> list[Triple]:
        return list(self._index().get(subject, ()))

    def subjects(self) -> set[Node]:
        return set(self._index())

    def objects(self, subject: Node, predicate: IRI) -> list[Term]:
        found = [t.object for t in self._index().get(subject, ()) if t.predicate == predicate]
        return sorted(found, key=term_key)

    def value(self, subject: Node, predicate: IRI) -> Term | None:
        found = self.objects(subject, predicate)
        return found[0] if found else None

    def subjects_of_type(self, rdf_type: IRI) -> list[Node]:
        from .terms import RDF_TYPE

        found = {t.subject for t in self._triples if t.predicate == RDF_TYPE and t.object == rdf_type}
        return sorted(found, key=term_key)

    def blank_nodes(self) -> set[BNode]:
        found: set[BNode] = set()
        for t in self._triples:
            if isinstance(t.subject, BNode):
                found.add(t.subject)
            if isinstance(t.object, BNode):
                found.add(t.object)
        return found

    def with_triples(self, triples: Iterable[Triple]) -> Graph:
        return Graph(self._triples.union(triples), self._prefixes)

    def without(self, triples: Iterable[Triple]) -> Graph:
        return Graph(self._triples.difference(triples), self._prefixes)

    def with_prefixes(self, prefixes: Mapping[str, str]) -> Graph:
        merged = dict(self._prefixes)
        merged.update(prefixes)
        return Graph(self._triples, merged)

    def __or__(self, other: Graph) -> Graph:
        merged = dict(other.prefixes)
        merged.update(self._prefixes)
        return Graph(self._triples | other._triples, merged)

    def rooted_at(self, root: Node) -> Graph:
        """Triples reachable from ``root`` by following subject→object links."""
        index = self._index()
        seen: set[Node] = set()
        stack: list[Node] = [root]
        out: list[Triple] = []
        while stack:
            node = stack.pop()
            if node in seen:
                continue
            seen.add(node)
            for t in index.get(node, ()):
                out.append(t)
                if isinstance(t.object, (IRI, BNode)) and t.object not in seen:
                    stack.append(t.object)
        return Graph(out, self._prefixes)

    def relabel(self, mapping: Mapping[BNode, BNode]) -> Graph:
        def sub(term):
            return mapping.get(term, term) if isinstance(term, BNode) else term

        return Graph(
            (Triple(sub(t.subject), t.predicate, sub(t.object)) for t in self._triples),
            self._prefixes,
        )
