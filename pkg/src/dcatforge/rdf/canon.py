"""Blank-node canonical labelling and graph isomorphism.

Both rest on colour refinement: every blank node is repeatedly re-hashed from
the colours of its neighbourhood until the partition stops splitting. When
refinement leaves ties, one node of the smallest tied class is individualised
and refinement resumes (deterministically for labelling, exhaustively for the
isomorphism search).
"""

from __future__ import annotations

import hashlib

from .errors import ComplexityLimit
from .graph import Graph
from .terms import BNode, term_key

MAX_BLANK_NODES = 64

_Edges = dict[BNode, list[tuple[str, str, object]]]


def _digest(*parts: str) -> str:
    h = hashlib.sha256()
    for p in parts:
        h.update(p.encode("utf-8"))
        h.update(b"\x00")
    return h.hexdigest()[:32]


def _edges(graph: Graph) -> _Edges:
    edges: _Edges = {b: [] for b in graph.blank_nodes()}
    for t in graph:
        pred = t.predicate.value
        if isinstance(t.subject, BNode):
            other = t.object if isinstance(t.object, BNode) else repr(term_key(t.object))
            edges[t.subject].append(("+", pred, other))
        if isinstance(t.object, BNode):
            other = t.subject if isinstance(t.subject, BNode) else repr(term_key(t.subject))
            edges[t.object].append(("-", pred, other))
    return edges


def _step(edges: _Edges, colors: dict[BNode, str]) -> dict[BNode, str]:
    new = {}
    for node, adj in edges.items():
        sigs = sorted(
            d + "|" + p + "|" + (colors[o] if isinstance(o, BNode) else o)  # type: ignore[index]
            for d, p, o in adj
        )
        new[node] = _digest(colors[node], *sigs)
    return new


def _classes(colors: dict[BNode, str]) -> int:
    return len(set(colors.values()))


def _refine(edges: _Edges, colors: dict[BNode, str]) -> dict[BNode, str]:
    while True:
        new = _step(edges, colors)
        if _classes(new) == _classes(colors):
            return new
        colors = new


def _smallest_tie(colors: dict[BNode, str]) -> list[BNode] | None:
    groups: dict[str, list[BNode]] = {}
    for node, c in colors.items():
        groups.setdefault(c, []).append(node)
    tied = [g for g in groups.values() if len(g) > 1]
    if not tied:
        return None
    best = min(tied, key=lambda g: (len(g), colors[g[0]]))
    return sorted(best, key=lambda b: b.label)


def canonical_labels(graph: Graph) -> dict[BNode, str]:
    """Map each blank node to a label that depends only on graph structure
    (up to tie-breaking by original label for automorphic nodes)."""
    edges = _edges(graph)
    if not edges:
        return {}
    colors = _refine(edges, {b: "" for b in edges})
    while (tie := _smallest_tie(colors)) is not None:
        chosen = tie[0]
        colors = dict(colors)
        colors[chosen] = _digest(colors[chosen], "individualised")
        colors = _refine(edges, colors)
    ordered = sorted(edges, key=lambda b: colors[b])
    width = len(str(len(ordered) - 1))
    return {b: f"b{i:0{width}d}" for i, b in enumerate(ordered)}


def canonicalize(graph: Graph) -> Graph:
    """Relabel blank nodes canonically."""
    labels = canonical_labels(graph)
    return graph.relabel({b: BNode(label) for b, label in labels.items()})


def _lockstep(ea: _Edges, eb: _Edges, ca: dict, cb: dict) -> tuple[dict, dict] | None:
    while True:
        na, nb = _step(ea, ca), _step(eb, cb)
        if sorted(na.values()) != sorted(nb.values()):
            return None
        if _classes(na) == _classes(ca) and _classes(nb) == _classes(cb):
            return na, nb
        ca, cb = na, nb


def graph_isomorphic(a: Graph, b: Graph) -> bool:
    """True iff a blank-node bijection maps ``a``'s triples onto ``b``'s."""
    if len(a) != len(b):
        return False
    ba, bb = a.blank_nodes(), b.blank_nodes()
    if len(ba) > MAX_BLANK_NODES or len(bb) > MAX_BLANK_NODES:
        raise ComplexityLimit(
            f"isomorphism check limited to {MAX_BLANK_NODES} blank nodes "
            f"(got {len(ba)} and {len(bb)})"
        )
    if len(ba) != len(bb):
        return False
    ground_a = {t for t in a if not isinstance(t.subject, BNode) and not isinstance(t.object, BNode)}
    ground_b = {t for t in b if not isinstance(t.subject, BNode) and not isinstance(t.object, BNode)}
    if ground_a != ground_b:
        return False
    if not ba:
        return True

    ea, eb = _edges(a), _edges(b)
    start = _lockstep(ea, eb, {x: "" for x in ea}, {x: "" for x in eb})
    if start is None:
        return False
    target = b.triples

    def search(ca: dict, cb: dict) -> bool:
        tie = _smallest_tie(ca)
        if tie is None:
            by_color = {c: node for node, c in cb.items()}
            mapping = {node: by_color[c] for node, c in ca.items()}
            return a.relabel(mapping).triples == target
        x = tie[0]
        for y in sorted((n for n, c in cb.items() if c == ca[x]), key=lambda n: n.label):
            na, nb = dict(ca), dict(cb)
            marker = _digest(ca[x], "individualised")
            na[x] = marker
            nb[y] = marker
            refined = _lockstep(ea, eb, na, nb)
            if refined is not None and search(*refined):
                return True
        return False

    return search(*start)

