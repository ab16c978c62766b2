"""Shared layout decisions for the two serializers."""

from __future__ import annotations

import re
from collections import Counter

from .graph import Graph, Triple
from .terms import RDF, WELL_KNOWN_PREFIXES, BNode, IRI, Node, term_key

_NCNAME_TAIL = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*$")
_PREFIX_NAME = re.compile(r"^[A-Za-z][A-Za-z0-9_\-]*$")


def split_iri(iri: str) -> tuple[str, str] | None:
    """Split into (namespace, local) with the longest NCName-safe local part."""
    m = _NCNAME_TAIL.search(iri)
    if m is None or m.start() == 0:
        return None
    return iri[: m.start()], iri[m.start():]


class Layout:
    """Which subjects are written at top level and which blank nodes nest."""

    def __init__(self, graph: Graph):
        self.graph = graph
        uses = Counter(t.object for t in graph if isinstance(t.object, BNode))
        subjects = graph.subjects()
        nestable = {b for b, n in uses.items() if n == 1}
        # a nested chain must hang off some top-level node; break cycles
        while True:
            reached = self._reach(subjects - nestable, nestable)
            orphans = sorted((b for b in nestable if b not in reached and b in subjects), key=term_key)
            if not orphans:
                break
            nestable.discard(orphans[0])
        self.nestable: set[BNode] = nestable
        self.top: list[Node] = sorted((s for s in subjects if s not in nestable), key=term_key)

    def _reach(self, roots: set[Node], nestable: set[BNode]) -> set[Node]:
        seen: set[Node] = set()
        stack = list(roots)
        while stack:
            node = stack.pop()
            if node in seen:
                continue
            seen.add(node)
            for t in self.graph.about(node):
                if t.object in nestable and t.object not in seen:
                    stack.append(t.object)
        return seen

    def properties(self, subject: Node) -> list[Triple]:
        return sorted(self.graph.about(subject), key=Triple.sort_key)


class PrefixTable:
    """Allocates prefixes for namespaces, preferring the graph's own declarations."""

    def __init__(self, declared: dict[str, str]):
        self.by_prefix: dict[str, str] = {}
        self.by_ns: dict[str, str] = {}
        for prefix, ns in sorted(declared.items()):
            if _PREFIX_NAME.match(prefix) and not prefix.lower().startswith("xml"):
                self.by_prefix[prefix] = ns
                self.by_ns.setdefault(ns, prefix)
        self._counter = 0

    def force(self, prefix: str, ns: str) -> None:
        old = self.by_prefix.get(prefix)
        if old is not None and old != ns:
            del self.by_ns[old]
        self.by_prefix[prefix] = ns
        self.by_ns[ns] = prefix

    def prefix_for(self, ns: str) -> str:
        if ns in self.by_ns:
            return self.by_ns[ns]
        for prefix, known in WELL_KNOWN_PREFIXES.items():
            if known == ns and prefix not in self.by_prefix:
                self.force(prefix, ns)
                return prefix
        while f"ns{self._counter}" in self.by_prefix:
            self._counter += 1
        prefix = f"ns{self._counter}"
        self.force(prefix, ns)
        return prefix

    def qname(self, iri: IRI) -> str | None:
        parts = split_iri(iri.value)
        if parts is None:
            return None
        ns, local = parts
        return f"{self.prefix_for(ns)}:{local}"


RDF_NS = str(RDF)
