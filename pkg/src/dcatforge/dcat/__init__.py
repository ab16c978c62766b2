"""DCAT-AP dataset views, controlled vocabularies and profile rules."""

from .model import (
    IANA_MEDIA_TYPES,
    DcatDataset,
    DcatDistribution,
    NotADataset,
    dataset_from_graph,
    dataset_to_graph,
    datasets_in,
    media_type_text,
)
from .profile import (
    DEFAULT_RULE_SET,
    MANDATORY_FIELDS,
    RULE_SETS,
    ProfileRuleSet,
    ProfileViolation,
    UnknownRuleSet,
    get_rule_set,
    validate_profile,
)
from .vocab import (
    FormatFlags,
    Membership,
    Vocabulary,
    default_vocabularies,
    default_vocabulary,
    load_vocabulary,
    parse_vocabulary,
    vocabulary_contains,
)

__all__ = [
    "DEFAULT_RULE_SET", "DcatDataset", "DcatDistribution", "FormatFlags", "IANA_MEDIA_TYPES",
    "MANDATORY_FIELDS", "Membership", "NotADataset", "ProfileRuleSet", "ProfileViolation",
    "RULE_SETS", "UnknownRuleSet", "Vocabulary", "dataset_from_graph", "dataset_to_graph",
    "datasets_in", "default_vocabularies", "default_vocabulary", "get_rule_set",
    "load_vocabulary", "media_type_text", "parse_vocabulary", "validate_profile",
    "vocabulary_contains",
]
