"""Turtle reader and writer (prefixes, base, literals, blank nodes, ``a``,
predicate/object lists). Collections raise :class:`UnsupportedFeature`."""

from __future__ import annotations

import itertools
import re
from urllib.parse import urljoin

from ._layout import Layout, PrefixTable, split_iri
from .canon import canonicalize
from .errors import RDFSyntaxError, UnsupportedFeature
from .graph import Graph, Triple
from .terms import RDF_TYPE, XSD, BNode, IRI, Literal, Node, Term, is_absolute_iri

_PNAME_NS = re.compile(r"([A-Za-z][A-Za-z0-9_\-.]*)?:")
_PN_LOCAL = re.compile(r"(?:[A-Za-z0-9_:]|%[0-9A-Fa-f]{2}|\\[_~.\-!$&'()*+,;=/?#@%])"
                       r"(?:(?:[A-Za-z0-9_\-:.]|%[0-9A-Fa-f]{2}|\\[_~.\-!$&'()*+,;=/?#@%])*"
                       r"(?:[A-Za-z0-9_\-:]|%[0-9A-Fa-f]{2}|\\[_~.\-!$&'()*+,;=/?#@%]))?")
_BLANK_LABEL = re.compile(r"_:([A-Za-z0-9_](?:[A-Za-z0-9_\-.]*[A-Za-z0-9_\-])?)")
_LANGTAG = re.compile(r"@([A-Za-z]{1,8}(?:-[A-Za-z0-9]{1,8})*)")
_NUMBER = re.compile(r"[+-]?(?:\d+\.\d*[eE][+-]?\d+|\.\d+[eE][+-]?\d+|\d+[eE][+-]?\d+|\d*\.\d+|\d+)")
_ECHAR = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


class _Parser:
    def __init__(self, text: str, base: str | None):
        self.s = text
        self.i = 0
        self.base = base
        self.prefixes: dict[str, str] = {}
        self.triples: list[Triple] = []
        self.labels: dict[str, BNode] = {}
        self._fresh = itertools.count()
        self._used = set(m.group(1) for m in _BLANK_LABEL.finditer(text))

    # -- low level ---------------------------------------------------------
    def pos(self, i: int | None = None) -> tuple[int, int]:
        i = self.i if i is None else i
        line = self.s.count("\n", 0, i) + 1
        col = i - (self.s.rfind("\n", 0, i) + 1) + 1
        return line, col

    def error(self, reason: str, i: int | None = None) -> RDFSyntaxError:
        return RDFSyntaxError(reason, *self.pos(i))

    def ws(self) -> None:
        s, n = self.s, len(self.s)
        while self.i < n:
            c = s[self.i]
            if c in " \t\r\n":
                self.i += 1
            elif c == "#":
                j = s.find("\n", self.i)
                self.i = n if j < 0 else j + 1
            else:
                break

    def peek(self) -> str:
        self.ws()
        return self.s[self.i] if self.i < len(self.s) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            found = self.s[self.i] if self.i < len(self.s) else "end of input"
            raise self.error(f"expected {ch!r}, found {found!r}")
        self.i += 1

    def keyword(self, word: str, case_insensitive: bool = False) -> bool:
        self.ws()
        chunk = self.s[self.i:self.i + len(word)]
        if (chunk.lower() == word.lower()) if case_insensitive else (chunk == word):
            after = self.s[self.i + len(word):self.i + len(word) + 1]
            if not after or not (after.isalnum() or after in "_-:"):
                self.i += len(word)
                return True
        return False

    def fresh(self) -> BNode:
        while True:
            label = f"genid{next(self._fresh)}"
            if label not in self._used:
                return BNode(label)

    # -- grammar -------------------------------------------------------------
    def document(self) -> Graph:
        while self.peek():
            self.statement()
        return Graph(self.triples, self.prefixes)

    def statement(self) -> None:
        if self.keyword("@prefix"):
            self.prefix_decl(dotted=True)
        elif self.keyword("@base"):
            self.base_decl(dotted=True)
        elif self.keyword("PREFIX", case_insensitive=True):
            self.prefix_decl(dotted=False)
        elif self.keyword("BASE", case_insensitive=True):
            self.base_decl(dotted=False)
        else:
            self.triples_stmt()
            self.expect(".")

    def prefix_decl(self, dotted: bool) -> None:
        self.ws()
        m = _PNAME_NS.match(self.s, self.i)
        if not m:
            raise self.error("expected a prefix name")
        self.i = m.end()
        ns = self.iriref()
        self.prefixes[m.group(1) or ""] = ns
        if dotted:
            self.expect(".")

    def base_decl(self, dotted: bool) -> None:
        self.base = self.iriref()
        if dotted:
            self.expect(".")

    def triples_stmt(self) -> None:
        c = self.peek()
        if c == "[":
            subject = self.blank_property_list()
            if self.peek() not in (".", ""):
                self.predicate_object_list(subject)
            return
        if c == "(":
            raise UnsupportedFeature(f"RDF collections (line {self.pos()[0]})")
        subject = self.subject()
        self.predicate_object_list(subject)

    def subject(self) -> Node:
        c = self.peek()
        if c == "_" and self.s.startswith("_:", self.i):
            return self.blank_label()
        term = self.iri()
        return term

    def predicate_object_list(self, subject: Node) -> None:
        while True:
            predicate = self.verb()
            self.object_list(subject, predicate)
            if self.peek() != ";":
                return
            while self.peek() == ";":
                self.i += 1
            if self.peek() in (".", "]", ""):
                return

    def verb(self) -> IRI:
        self.ws()
        if self.s.startswith("a", self.i):
            nxt = self.s[self.i + 1:self.i + 2]
            if not nxt or nxt in " \t\r\n<\"'[_(#":
                self.i += 1
                return RDF_TYPE
        return self.iri()

    def object_list(self, subject: Node, predicate: IRI) -> None:
        while True:
            obj = self.object()
            self.triples.append(Triple(subject, predicate, obj))
            if self.peek() != ",":
                return
            self.i += 1

    def object(self) -> Term:
        c = self.peek()
        if c == "[":
            return self.blank_property_list()
        if c == "(":
            raise UnsupportedFeature(f"RDF collections (line {self.pos()[0]})")
        if c in "\"'":
            return self.literal()
        if c == "_" and self.s.startswith("_:", self.i):
            return self.blank_label()
        if c and (c.isdigit() or c in "+-."):
            return self.number()
        if self.keyword("true"):
            return Literal("true", XSD.boolean)
        if self.keyword("false"):
            return Literal("false", XSD.boolean)
        return self.iri()

    def blank_property_list(self) -> BNode:
        self.expect("[")
        node = self.fresh()
        if self.peek() != "]":
            self.predicate_object_list(node)
        self.expect("]")
        return node

    def blank_label(self) -> BNode:
        m = _BLANK_LABEL.match(self.s, self.i)
        if not m:
            raise self.error("malformed blank node label")
        self.i = m.end()
        label = m.group(1)
        return self.labels.setdefault(label, BNode(label))

    def number(self) -> Literal:
        m = _NUMBER.match(self.s, self.i)
        if not m:
            raise self.error("malformed number")
        self.i = m.end()
        text = m.group(0)
        if "e" in text or "E" in text:
            return Literal(text, XSD.double)
        if "." in text:
            return Literal(text, XSD.decimal)
        return Literal(text, XSD.integer)

    def resolve(self, value: str, at: int) -> IRI:
        if not is_absolute_iri(value):
            if self.base is None:
                raise self.error(f"relative IRI {value!r} with no base", at)
            value = urljoin(self.base, value)
        try:
            return IRI(value)
        except ValueError as exc:
            raise self.error(str(exc), at) from None

    def iriref(self) -> str:
        self.ws()
        start = self.i
        if self.peek() != "<":
            raise self.error("expected an IRI")
        j = self.i + 1
        out = []
        while True:
            if j >= len(self.s):
                raise self.error("unterminated IRI", start)
            c = self.s[j]
            if c == ">":
                break
            if c == "\\":
                out.append(self.uchar(j))
                j += 6 if self.s[j + 1] == "u" else 10
                continue
            if c in ' <"{}|^`\n\r\t':
                raise self.error(f"illegal character {c!r} in IRI", j)
            out.append(c)
            j += 1
        self.i = j + 1
        value = "".join(out)
        if not is_absolute_iri(value) and self.base is not None:
            value = urljoin(self.base, value)
        return value

    def uchar(self, j: int) -> str:
        kind = self.s[j + 1:j + 2]
        width = {"u": 4, "U": 8}.get(kind)
        digits = self.s[j + 2:j + 2 + width] if width else ""
        if not width or len(digits) != width or not all(ch in "0123456789abcdefABCDEF" for ch in digits):
            raise self.error("malformed unicode escape", j)
        return chr(int(digits, 16))

    def iri(self) -> IRI:
        self.ws()
        start = self.i
        if self.peek() == "<":
            return self.resolve(self.iriref(), start)
        m = _PNAME_NS.match(self.s, self.i)
        if not m:
            found = self.s[self.i:self.i + 10] or "end of input"
            raise self.error(f"expected an IRI or prefixed name, found {found!r}")
        prefix = m.group(1) or ""
        if prefix not in self.prefixes:
            raise self.error(f"undeclared prefix {prefix!r}")
        self.i = m.end()
        local = ""
        lm = _PN_LOCAL.match(self.s, self.i)
        if lm:
            self.i = lm.end()
            local = re.sub(r"\\(.)", r"\1", lm.group(0))
        return self.resolve(self.prefixes[prefix] + local, start)

    def string(self) -> str:
        q = self.s[self.i]
        start = self.i
        long = self.s.startswith(q * 3, self.i)
        delim = q * 3 if long else q
        j = self.i + len(delim)
        out = []
        while True:
            if j >= len(self.s):
                raise self.error("unterminated string", start)
            if self.s.startswith(delim, j):
                break
            c = self.s[j]
            if c == "\\":
                e = self.s[j + 1:j + 2]
                if e in _ECHAR:
                    out.append(_ECHAR[e])
                    j += 2
                elif e in ("u", "U"):
                    out.append(self.uchar(j))
                    j += 6 if e == "u" else 10
                else:
                    raise self.error(f"bad escape \\{e}", j)
                continue
            if not long and c in "\r\n":
                raise self.error("newline in single-quoted string", j)
            out.append(c)
            j += 1
        self.i = j + len(delim)
        return "".join(out)

    def literal(self) -> Literal:
        start = self.i
        lexical = self.string()
        if self.s.startswith("@", self.i):
            m = _LANGTAG.match(self.s, self.i)
            if not m:
                raise self.error("malformed language tag")
            self.i = m.end()
            return Literal(lexical, language=m.group(1))
        if self.s.startswith("^^", self.i):
            self.i += 2
            return Literal(lexical, self.iri())
        try:
            return Literal(lexical)
        except ValueError as exc:  # pragma: no cover - plain literals always valid
            raise self.error(str(exc), start) from None


def parse_turtle(document: str | bytes, base: str | None = None) -> Graph:
    if isinstance(document, bytes):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise RDFSyntaxError(f"invalid UTF-8: {exc.reason}", 1, exc.start + 1) from None
    return _Parser(document, base).document()


_SAFE_LOCAL = re.compile(r"^[A-Za-z_][A-Za-z0-9_\-]*$")


def _quote(value: str) -> str:
    out = []
    for ch in value:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif ord(ch) < 0x20 or ord(ch) == 0x7F or 0xD800 <= ord(ch) <= 0xDFFF:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return '"' + "".join(out) + '"'


def _iriref(value: str) -> str:
    out = []
    for ch in value:
        if ch in ' <>"{}|^`\\' or ord(ch) <= 0x20:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "<" + "".join(out) + ">"


class _Writer:
    def __init__(self, graph: Graph):
        self.graph = canonicalize(graph)
        self.layout = Layout(self.graph)
        self.prefixes = PrefixTable(dict(graph.prefixes))

    def iri(self, iri: IRI) -> str:
        parts = split_iri(iri.value)
        if parts is not None and _SAFE_LOCAL.match(parts[1]):
            return f"{self.prefixes.prefix_for(parts[0])}:{parts[1]}"
        return _iriref(iri.value)

    def term(self, term: Term, depth: int) -> str:
        if isinstance(term, IRI):
            return self.iri(term)
        if isinstance(term, BNode):
            if term in self.layout.nestable:
                return self.nested(term, depth)
            return f"_:{term.label}"
        text = _quote(term.lexical)
        if term.language:
            return f"{text}@{term.language}"
        if term.datatype:
            return f"{text}^^{self.iri(term.datatype)}"
        return text

    def nested(self, node: BNode, depth: int) -> str:
        props = self.layout.properties(node)
        if not props:
            return "[]"
        pad = "    " * (depth + 1)
        body = self.predicate_objects(props, depth + 1)
        return "[\n" + pad + body + "\n" + "    " * depth + "]"

    def predicate_objects(self, props: list[Triple], depth: int) -> str:
        pad = "    " * depth
        groups: list[tuple[IRI, list[Term]]] = []
        for t in props:
            if groups and groups[-1][0] == t.predicate:
                groups[-1][1].append(t.object)
            else:
                groups.append((t.predicate, [t.object]))
        chunks = []
        for predicate, objects in groups:
            verb = "a" if predicate == RDF_TYPE else self.iri(predicate)
            objs = ", ".join(self.term(o, depth) for o in objects)
            chunks.append(f"{verb} {objs}")
        return (" ;\n" + pad).join(chunks)

    def render(self) -> str:
        blocks = []
        for subject in self.layout.top:
            head = self.iri(subject) if isinstance(subject, IRI) else f"_:{subject.label}"
            body = self.predicate_objects(self.layout.properties(subject), 1)
            blocks.append(f"{head}\n    {body} .")
        decls = [f"@prefix {p}: {_iriref(ns)} ." for p, ns in sorted(self.prefixes.by_prefix.items())]
        parts = []
        if decls:
            parts.append("\n".join(decls))
        parts.extend(blocks)
        return "\n\n".join(parts) + "\n" if parts else ""


def serialize_turtle(graph: Graph) -> str:
    return _Writer(graph).render()
