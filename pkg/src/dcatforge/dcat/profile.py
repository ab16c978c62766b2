"""Fixed-rule DCAT-AP profile validation.

Seven rules stand in for the official SHACL shapes:

R1  title present
R2  description present
R3  at least one distribution with an accessURL
R4  issued/modified, when present, typed xsd:dateTime
R5  accessRights, when present, in the access-rights vocabulary
R6  contactPoint, when present, is a described node rather than a bare reference
R7  every theme in the data-theme vocabulary
"""

from __future__ import annotations

from collections.abc import Callable, Mapping
from dataclasses import dataclass

from ..rdf import XSD, Literal, Node
from .model import DcatDataset
from .vocab import Vocabulary, default_vocabularies, vocabulary_contains


class UnknownRuleSet(LookupError):
    pass


@dataclass(frozen=True)
class ProfileViolation:
    subject: Node
    rule: str
    message: str


@dataclass(frozen=True)
class ProfileRuleSet:
    name: str
    rules: tuple[str, ...]


_Check = Callable[[DcatDataset, Mapping[str, Vocabulary]], list[tuple[Node, str]]]


def _r1(d, _v):
    return [] if d.title is not None else [(d.id, "dct:title is missing")]


def _r2(d, _v):
    return [] if d.description is not None else [(d.id, "dct:description is missing")]


def _r3(d, _v):
    if any(dist.access_url is not None for dist in d.distributions):
        return []
    return [(d.id, "no dcat:distribution with a dcat:accessURL")]


def _r4(d, _v):
    out = []
    for name, value in (("dct:issued", d.issued), ("dct:modified", d.modified)):
        if value is not None and (not isinstance(value, Literal) or value.datatype != XSD.dateTime):
            out.append((d.id, f"{name} must be typed xsd:dateTime"))
    return out


def _r5(d, v):
    if d.access_rights is None or vocabulary_contains(v["access-rights"], d.access_rights):
        return []
    return [(d.id, f"dct:accessRights {d.access_rights.value} is not in the access-rights vocabulary")]


def _r6(d, _v):
    cp = d.contact_point
    if cp is None or d.describes(cp):
        return []
    return [(d.id, f"dcat:contactPoint {cp} is a bare reference; expected a vcard:Kind node")]


def _r7(d, v):
    return [
        (d.id, f"dcat:theme {t.value} is not in the data-theme vocabulary")
        for t in d.themes
        if not vocabulary_contains(v["data-theme"], t)
    ]


RULES: dict[str, _Check] = {"R1": _r1, "R2": _r2, "R3": _r3, "R4": _r4, "R5": _r5, "R6": _r6, "R7": _r7}

# both supported DCAT-AP versions share the same minimal rule set
RULE_SETS: dict[str, ProfileRuleSet] = {
    name: ProfileRuleSet(name, tuple(RULES))
    for name in ("dcatap-2.1.0-min", "dcatap-2.0.1-min")
}
DEFAULT_RULE_SET = "dcatap-2.1.0-min"

# dataset fields each rule needs before it can possibly pass
MANDATORY_FIELDS = {"R1": "title", "R2": "description", "R3": "distribution.access_url"}


def get_rule_set(name: str) -> ProfileRuleSet:
    try:
        return RULE_SETS[name]
    except KeyError:
        raise UnknownRuleSet(f"no profile rule set named {name!r}") from None


def validate_profile(
    dataset: DcatDataset,
    rules: ProfileRuleSet | str = DEFAULT_RULE_SET,
    vocabularies: Mapping[str, Vocabulary] | None = None,
) -> list[ProfileViolation]:
    if isinstance(rules, str):
        rules = get_rule_set(rules)
    unknown = [r for r in rules.rules if r not in RULES]
    if unknown:
        raise UnknownRuleSet(f"rule set {rules.name!r} references undefined rules {unknown}")
    vocabularies = vocabularies or default_vocabularies()
    out = []
    for rule_id in sorted(set(rules.rules)):
        for subject, message in RULES[rule_id](dataset, vocabularies):
            out.append(ProfileViolation(subject, rule_id, message))
    return out
