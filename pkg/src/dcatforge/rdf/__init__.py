"""Minimal RDF model: terms, immutable graphs, RDF/XML and Turtle I/O,
blank-node canonicalisation and isomorphism."""

from __future__ import annotations

from .canon import MAX_BLANK_NODES, canonical_labels, canonicalize, graph_isomorphic
from .errors import ComplexityLimit, RDFError, RDFSyntaxError, UnsupportedFeature
from .graph import Graph, Triple
from .rdfxml import parse_rdfxml, serialize_rdfxml
from .terms import (
    DCAT,
    DCT,
    FOAF,
    OWL,
    RDF,
    RDF_TYPE,
    RDFS,
    SKOS,
    VCARD,
    XSD,
    BNode,
    IRI,
    Literal,
    Namespace,
    Node,
    Term,
    term_key,
)

FORMATS = ("rdf-xml", "turtle")


def _check_format(fmt: str) -> str:
    if fmt not in FORMATS:
        raise ValueError(f"unknown RDF format {fmt!r}; expected one of {FORMATS}")
    return fmt


def parse(document: str | bytes, format: str = "rdf-xml", base: str | None = None) -> Graph:
    if _check_format(format) == "rdf-xml":
        return parse_rdfxml(document, base)
    from .turtle import parse_turtle

    return parse_turtle(document, base)


def serialize(graph: Graph, format: str = "rdf-xml") -> str:
    if _check_format(format) == "rdf-xml":
        return serialize_rdfxml(graph)
    from .turtle import serialize_turtle

    return serialize_turtle(graph)


def guess_format(path: str) -> str:
    return "turtle" if path.lower().endswith((".ttl", ".turtle")) else "rdf-xml"


__all__ = [
    "BNode", "ComplexityLimit", "DCAT", "DCT", "FOAF", "FORMATS", "Graph", "IRI", "Literal",
    "MAX_BLANK_NODES", "Namespace", "Node", "OWL", "RDF", "RDFError", "RDFS", "RDFSyntaxError",
    "RDF_TYPE", "SKOS", "Term", "Triple", "UnsupportedFeature", "VCARD", "XSD",
    "canonical_labels", "canonicalize", "graph_isomorphic", "guess_format", "parse",
    "serialize", "term_key",
]
