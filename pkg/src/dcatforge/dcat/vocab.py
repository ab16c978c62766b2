"""Controlled vocabularies loaded from tab-separated files.

File format: one member IRI per line, optionally followed by ``open=0|1`` and
``machine=0|1`` columns (file types). ``# base: <iri>`` lets bare codes such
as ``CSV`` resolve to ``<base>CSV``; other ``#`` lines are comments.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from ..rdf import IRI, Literal
from ..rdf.terms import is_absolute_iri

DEFAULT_VOCABULARIES = ("data-theme", "file-types", "media-types", "access-rights", "licenses")


@dataclass(frozen=True)
class FormatFlags:
    open: bool
    machine_readable: bool


@dataclass(frozen=True)
class Membership:
    member: bool
    iri: str | None = None
    open: bool | None = None
    machine_readable: bool | None = None

    def __bool__(self) -> bool:
        return self.member


@dataclass(frozen=True)
class Vocabulary:
    id: str
    members: frozenset[str]
    flags: Mapping[str, FormatFlags] = field(default_factory=dict)
    base: str | None = None

    def __post_init__(self):
        if not self.members:
            raise ValueError(f"vocabulary {self.id!r} has no members")
        if self.flags and set(self.flags) != set(self.members):
            raise ValueError(f"vocabulary {self.id!r}: flags must cover every member")
        object.__setattr__(self, "flags", MappingProxyType(dict(self.flags)))

    def resolve(self, candidate: IRI | Literal | str) -> str:
        if isinstance(candidate, IRI):
            return candidate.value
        text = candidate.lexical if isinstance(candidate, Literal) else str(candidate)
        if self.base and not is_absolute_iri(text):
            return self.base + text
        return text


def vocabulary_contains(vocab: Vocabulary, candidate: IRI | Literal | str) -> Membership:
    """Exact, case-sensitive membership; file-type vocabularies also report flags."""
    iri = vocab.resolve(candidate)
    if iri not in vocab.members:
        return Membership(False)
    flags = vocab.flags.get(iri)
    if flags is None:
        return Membership(True, iri)
    return Membership(True, iri, flags.open, flags.machine_readable)


def parse_vocabulary(vocab_id: str, text: str) -> Vocabulary:
    members: set[str] = set()
    flags: dict[str, FormatFlags] = {}
    base = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("base:"):
                base = body[5:].strip()
            continue
        cols = line.split("\t")
        iri = cols[0].strip()
        if not is_absolute_iri(iri):
            raise ValueError(f"{vocab_id}:{lineno}: not an absolute IRI: {iri!r}")
        members.add(iri)
        opts = {}
        for col in cols[1:]:
            key, _, value = col.strip().partition("=")
            if key not in ("open", "machine") or value not in ("0", "1"):
                raise ValueError(f"{vocab_id}:{lineno}: bad column {col!r}")
            opts[key] = value == "1"
        if opts:
            flags[iri] = FormatFlags(opts.get("open", False), opts.get("machine", False))
    return Vocabulary(vocab_id, frozenset(members), flags, base)


def load_vocabulary(path: str | Path, vocab_id: str | None = None) -> Vocabulary:
    path = Path(path)
    return parse_vocabulary(vocab_id or path.stem, path.read_text(encoding="utf-8"))


@lru_cache(maxsize=None)
def default_vocabulary(vocab_id: str) -> Vocabulary:
    if vocab_id not in DEFAULT_VOCABULARIES:
        raise KeyError(f"no bundled vocabulary named {vocab_id!r}")
    text = resources.files(__package__).joinpath("data", f"{vocab_id}.tsv").read_text(encoding="utf-8")
    return parse_vocabulary(vocab_id, text)


def default_vocabularies() -> dict[str, Vocabulary]:
    return {name: default_vocabulary(name) for name in DEFAULT_VOCABULARIES}
