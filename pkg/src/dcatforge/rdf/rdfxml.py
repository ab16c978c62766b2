"""RDF/XML reader and writer for the subset used by DCAT-AP documents.

Supported: ``rdf:RDF`` wrapper (or a single top-level node element), typed
node elements, ``rdf:about``/``rdf:nodeID``, property elements with
``rdf:resource``/``rdf:nodeID``/``rdf:datatype``, nested node elements,
``rdf:parseType="Resource"``, property attributes, ``xml:lang`` and
``xml:base``. Containers, collections, XML literals and reification raise
:class:`UnsupportedFeature`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from urllib.parse import urljoin
from xml.parsers import expat

from ._layout import RDF_NS, Layout, PrefixTable
from .canon import canonicalize
from .errors import RDFSyntaxError, UnsupportedFeature
from .graph import Graph, Triple
from .terms import RDF_TYPE, XML_NS, BNode, IRI, Literal, Node, is_absolute_iri

_SEP = " "
_RDF_RESERVED_ATTRS = {"about", "nodeID", "ID", "resource", "datatype", "parseType", "type"}
_FORBIDDEN_PROPERTY_NAMES = {"RDF", "Description", "ID", "about", "parseType", "resource", "nodeID", "datatype"}


@dataclass
class _El:
    ns: str
    local: str
    attrs: dict[tuple[str, str], str]
    line: int
    col: int
    children: list[_El] = field(default_factory=list)
    text: list[str] = field(default_factory=list)

    def attr(self, ns: str, local: str) -> str | None:
        return self.attrs.get((ns, local))

    def err(self, reason: str) -> RDFSyntaxError:
        return RDFSyntaxError(reason, self.line, self.col)

    def child_text(self) -> str:
        return "".join(self.text)


XmlElement = _El


def _split(name: str) -> tuple[str, str]:
    if _SEP in name:
        ns, local = name.split(_SEP, 1)
        return ns, local
    return "", name


def _read_tree(document: str | bytes) -> tuple[_El | None, dict[str, str]]:
    parser = expat.ParserCreate(namespace_separator=_SEP)
    prefixes: dict[str, str] = {}
    stack: list[_El] = []
    root: list[_El] = []

    def start_ns(prefix, uri):
        if uri:
            prefixes.setdefault(prefix or "", uri)

    def start(name, attrs):
        ns, local = _split(name)
        el = _El(ns, local, {_split(k): v for k, v in attrs.items()},
                 parser.CurrentLineNumber, parser.CurrentColumnNumber + 1)
        if stack:
            stack[-1].children.append(el)
        else:
            root.append(el)
        stack.append(el)

    def end(name):
        stack.pop()

    def chars(data):
        if stack:
            stack[-1].text.append(data)

    parser.StartNamespaceDeclHandler = start_ns
    parser.StartElementHandler = start
    parser.EndElementHandler = end
    parser.CharacterDataHandler = chars
    parser.buffer_text = True
    try:
        if isinstance(document, str):
            parser.Parse(document.encode("utf-8"), True)
        else:
            parser.Parse(document, True)
    except expat.ExpatError as exc:
        raise RDFSyntaxError(expat.ErrorString(exc.code), exc.lineno, exc.offset + 1) from None
    return (root[0] if root else None), prefixes


class _Reader:
    def __init__(self, base: str | None):
        self.base = base
        self.triples: list[Triple] = []
        self.used_ids: set[str] = set()
        self._fresh = itertools.count()

    def fresh(self) -> BNode:
        while True:
            label = f"genid{next(self._fresh)}"
            if label not in self.used_ids:
                return BNode(label)

    def collect_ids(self, el: _El) -> None:
        v = el.attr(RDF_NS, "nodeID")
        if v is not None:
            self.used_ids.add(v)
        for c in el.children:
            self.collect_ids(c)

    def iri(self, el: _El, value: str, base: str | None) -> IRI:
        if not is_absolute_iri(value):
            if base is None:
                raise el.err(f"relative IRI {value!r} with no base")
            value = urljoin(base, value)
        try:
            return IRI(value)
        except ValueError as exc:
            raise el.err(str(exc)) from None

    def scope(self, el: _El, base: str | None, lang: str | None) -> tuple[str | None, str | None]:
        b = el.attr(XML_NS, "base")
        if b is not None:
            base = urljoin(base, b) if base else b
        lg = el.attr(XML_NS, "lang")
        if lg is not None:
            lang = lg or None
        return base, lang

    def add(self, el: _El, s: Node, p: IRI, o) -> None:
        self.triples.append(Triple(s, p, o))

    def literal(self, el: _El, text: str, datatype: IRI | None, lang: str | None) -> Literal:
        try:
            return Literal(text, datatype, None if datatype else lang)
        except ValueError as exc:
            raise el.err(str(exc)) from None

    @staticmethod
    def _text(el: _El) -> str:
        return "".join(el.text)

    def node_element(self, el: _El, base: str | None, lang: str | None) -> Node:
        base, lang = self.scope(el, base, lang)
        if el.ns == RDF_NS and el.local in ("li", "Seq", "Bag", "Alt"):
            raise UnsupportedFeature(f"rdf:{el.local} containers (line {el.line})")
        if el.ns == RDF_NS and el.local in _FORBIDDEN_PROPERTY_NAMES - {"Description"}:
            raise el.err(f"rdf:{el.local} cannot be used as a node element")
        if not el.ns:
            raise el.err(f"node element {el.local!r} has no namespace")
        about = el.attr(RDF_NS, "about")
        node_id = el.attr(RDF_NS, "nodeID")
        if el.attr(RDF_NS, "ID") is not None:
            raise UnsupportedFeature(f"rdf:ID on node elements (line {el.line})")
        if about is not None and node_id is not None:
            raise el.err("rdf:about and rdf:nodeID are mutually exclusive")
        if about is not None:
            subject: Node = self.iri(el, about, base)
        elif node_id is not None:
            subject = BNode(node_id)
        else:
            subject = self.fresh()
        if not (el.ns == RDF_NS and el.local == "Description"):
            self.add(el, subject, RDF_TYPE, self.iri(el, el.ns + el.local, None))
        self.property_attributes(el, subject, base, lang, allow=("about", "nodeID"))
        if self._text(el).strip():
            raise el.err("unexpected text inside a node element")
        for child in el.children:
            self.property_element(child, subject, base, lang)
        return subject

    def property_attributes(self, el: _El, subject: Node, base, lang, allow: tuple[str, ...]) -> int:
        n = 0
        for (ns, local), value in sorted(el.attrs.items()):
            if ns == XML_NS or (ns == "" and local.startswith("xml")):
                continue
            if ns == RDF_NS:
                if local in allow:
                    continue
                if local == "type":
                    self.add(el, subject, RDF_TYPE, self.iri(el, value, base))
                    n += 1
                    continue
                if local in _RDF_RESERVED_ATTRS:
                    raise el.err(f"rdf:{local} is not allowed here")
                if local in ("aboutEach", "aboutEachPrefix", "bagID"):
                    raise UnsupportedFeature(f"rdf:{local} (line {el.line})")
            if not ns:
                raise el.err(f"unqualified attribute {local!r}")
            self.add(el, subject, self.iri(el, ns + local, None), self.literal(el, value, None, lang))
            n += 1
        return n

    def property_element(self, el: _El, subject: Node, base: str | None, lang: str | None) -> None:
        base, lang = self.scope(el, base, lang)
        if el.ns == RDF_NS and el.local == "li":
            raise UnsupportedFeature(f"rdf:li container membership (line {el.line})")
        if el.ns == RDF_NS and el.local in _FORBIDDEN_PROPERTY_NAMES:
            raise el.err(f"rdf:{el.local} cannot be used as a property element")
        if not el.ns:
            raise el.err(f"property element {el.local!r} has no namespace")
        predicate = self.iri(el, el.ns + el.local, None)
        if el.attr(RDF_NS, "ID") is not None:
            raise UnsupportedFeature(f"rdf:ID reification on property elements (line {el.line})")

        parse_type = el.attr(RDF_NS, "parseType")
        resource = el.attr(RDF_NS, "resource")
        node_id = el.attr(RDF_NS, "nodeID")
        datatype = el.attr(RDF_NS, "datatype")
        text = self._text(el)

        if parse_type is not None:
            if parse_type != "Resource":
                raise UnsupportedFeature(f'rdf:parseType="{parse_type}" (line {el.line})')
            if resource is not None or node_id is not None or datatype is not None:
                raise el.err("rdf:parseType cannot be combined with rdf:resource, rdf:nodeID or rdf:datatype")
            if text.strip():
                raise el.err("unexpected text inside parseType=\"Resource\"")
            obj = self.fresh()
            self.add(el, subject, predicate, obj)
            for child in el.children:
                self.property_element(child, obj, base, lang)
            return

        if el.children:
            if len(el.children) > 1:
                raise el.err("a property element may contain only one node element")
            if text.strip():
                raise el.err("mixed text and element content")
            if resource is not None or node_id is not None or datatype is not None:
                raise el.err("rdf:resource/rdf:nodeID/rdf:datatype on a property with a nested node")
            obj = self.node_element(el.children[0], base, lang)
            self.add(el, subject, predicate, obj)
            return

        if datatype is not None or text:
            if resource is not None or node_id is not None:
                raise el.err("a literal property cannot also carry rdf:resource or rdf:nodeID")
            dt = self.iri(el, datatype, base) if datatype is not None else None
            if any(k[0] != XML_NS and k != (RDF_NS, "datatype") for k in el.attrs):
                raise el.err("unexpected attributes on a literal property element")
            self.add(el, subject, predicate, self.literal(el, text, dt, lang))
            return

        if resource is not None and node_id is not None:
            raise el.err("rdf:resource and rdf:nodeID are mutually exclusive")
        others = [k for k in el.attrs if k[0] != XML_NS and not (k[0] == RDF_NS and k[1] in ("resource", "nodeID"))]
        if resource is not None:
            obj: Node | Literal = self.iri(el, resource, base)
        elif node_id is not None:
            obj = BNode(node_id)
        elif others:
            obj = self.fresh()
        else:
            self.add(el, subject, predicate, self.literal(el, "", None, lang))
            return
        self.add(el, subject, predicate, obj)
        if others:
            self.property_attributes(el, obj, base, lang, allow=("resource", "nodeID"))  # type: ignore[arg-type]


def read_xml(document: str | bytes) -> tuple[XmlElement | None, dict[str, str]]:
    """Namespace-resolved element tree plus every prefix declared in the document."""
    return _read_tree(document)


def graph_from_element(root: XmlElement, prefixes: dict[str, str] | None = None, base: str | None = None) -> Graph:
    """Read triples from an ``rdf:RDF`` (or single node) element of a larger document."""
    reader = _Reader(base)
    reader.collect_ids(root)
    if root.ns == RDF_NS and root.local == "RDF":
        rbase, rlang = reader.scope(root, base, None)
        if "".join(root.text).strip():
            raise root.err("unexpected text inside rdf:RDF")
        for child in root.children:
            reader.node_element(child, rbase, rlang)
    else:
        reader.node_element(root, base, None)
    return Graph(reader.triples, prefixes or {})


def parse_rdfxml(document: str | bytes, base: str | None = None) -> Graph:
    root, prefixes = _read_tree(document)
    if root is None:
        raise RDFSyntaxError("empty document", 1, 1)
    return graph_from_element(root, prefixes, base)


def _escape_text(value: str) -> str:
    _check_xml_chars(value)
    return (
        value.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace("\r", "&#13;")
    )


def _escape_attr(value: str) -> str:
    _check_xml_chars(value)
    return (
        value.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
        .replace("\r", "&#13;")
        .replace("\n", "&#10;")
        .replace("\t", "&#9;")
    )


def _check_xml_chars(value: str) -> None:
    for ch in value:
        o = ord(ch)
        if (o < 0x20 and ch not in "\t\n\r") or 0xD800 <= o <= 0xDFFF or o in (0xFFFE, 0xFFFF):
            raise ValueError(f"character U+{o:04X} cannot be represented in XML 1.0")


class _Writer:
    def __init__(self, graph: Graph):
        self.graph = canonicalize(graph)
        self.layout = Layout(self.graph)
        self.prefixes = PrefixTable(dict(graph.prefixes))
        self.prefixes.force("rdf", RDF_NS)
        self.lines: list[str] = []

    def pname(self, iri: IRI) -> str:
        q = self.prefixes.qname(iri)
        if q is None:
            raise ValueError(f"{iri.value!r} cannot be written as an RDF/XML element name")
        return q

    def node(self, subject: Node, depth: int, nested: bool) -> None:
        pad = "  " * depth
        props = self.layout.properties(subject)
        tag = "rdf:Description"
        type_triple = next(
            (t for t in props if t.predicate == RDF_TYPE and isinstance(t.object, IRI)
             and self.prefixes.qname(t.object) is not None),
            None,
        )
        if type_triple is not None:
            tag = self.pname(type_triple.object)  # type: ignore[arg-type]
            props = [t for t in props if t is not type_triple]
        if isinstance(subject, IRI):
            ident = f' rdf:about="{_escape_attr(subject.value)}"'
        elif nested:
            ident = ""
        else:
            ident = f' rdf:nodeID="{subject.label}"'
        if not props:
            self.lines.append(f"{pad}<{tag}{ident}/>")
            return
        self.lines.append(f"{pad}<{tag}{ident}>")
        for t in props:
            self.prop(t, depth + 1)
        self.lines.append(f"{pad}</{tag}>")

    def prop(self, t: Triple, depth: int) -> None:
        pad = "  " * depth
        name = self.pname(t.predicate)
        o = t.object
        if isinstance(o, IRI):
            self.lines.append(f'{pad}<{name} rdf:resource="{_escape_attr(o.value)}"/>')
        elif isinstance(o, BNode):
            if o in self.layout.nestable:
                self.lines.append(f"{pad}<{name}>")
                self.node(o, depth + 1, nested=True)
                self.lines.append(f"{pad}</{name}>")
            else:
                self.lines.append(f'{pad}<{name} rdf:nodeID="{o.label}"/>')
        else:
            attrs = ""
            if o.language:
                attrs = f' xml:lang="{o.language}"'
            elif o.datatype:
                attrs = f' rdf:datatype="{_escape_attr(o.datatype.value)}"'
            self.lines.append(f"{pad}<{name}{attrs}>{_escape_text(o.lexical)}</{name}>")

    def render(self) -> str:
        for subject in self.layout.top:
            self.node(subject, 1, nested=False)
        decls = "".join(
            f'\n  xmlns:{p}="{_escape_attr(ns)}"' for p, ns in sorted(self.prefixes.by_prefix.items())
        )
        head = f'<?xml version="1.0" encoding="utf-8"?>\n<rdf:RDF{decls}\n>'
        if not self.lines:
            return head[:-1] + "/>\n"
        return head + "\n" + "\n".join(self.lines) + "\n</rdf:RDF>\n"


def serialize_rdfxml(graph: Graph) -> str:
    return _Writer(graph).render()
