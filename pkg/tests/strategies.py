"""Hypothesis strategies shared across the suite."""

from __future__ import annotations

from hypothesis import strategies as st

from dcatforge.dcat import DcatDataset, DcatDistribution
from dcatforge.mqa import DIMENSIONS, IndicatorResult, QualityReport
from dcatforge.rdf import RDF_TYPE, VCARD, XSD, BNode, Graph, IRI, Literal, Triple

_XML_TEXT = st.text(
    alphabet=st.characters(blacklist_categories=("Cs",), blacklist_characters="\x00￾￿",
                           max_codepoint=0x2FFFF).filter(lambda c: c in "\t\n\r" or ord(c) >= 0x20),
    max_size=12,
)
_LOCAL = st.from_regex(r"[a-z][a-zA-Z0-9_]{0,6}", fullmatch=True)
_NAMESPACES = ["http://example.org/ns#", "http://purl.org/dc/terms/", "http://www.w3.org/ns/dcat#",
               "https://data.example.org/def/"]

iris = st.builds(lambda ns, local: IRI(ns + local), st.sampled_from(_NAMESPACES), _LOCAL)
subject_iris = st.builds(lambda n: IRI(f"https://data.example.org/id/{n}"), st.integers(0, 30))
bnodes = st.builds(BNode, st.sampled_from([f"n{i}" for i in range(6)]))
literals = st.one_of(
    st.builds(Literal, _XML_TEXT),
    st.builds(lambda t, lang: Literal(t, language=lang), _XML_TEXT, st.sampled_from(["en", "es", "en-GB"])),
    st.builds(lambda t, dt: Literal(t, dt), _XML_TEXT, st.sampled_from([XSD.string, XSD.dateTime, XSD.decimal])),
)
predicates = st.builds(lambda ns, local: IRI(ns + local), st.sampled_from(_NAMESPACES), _LOCAL)
subjects = st.one_of(subject_iris, bnodes)
objects = st.one_of(subject_iris, bnodes, literals, iris)
triples = st.builds(Triple, subjects, predicates, objects)
graphs = st.builds(Graph, st.lists(triples, max_size=14))

json_scalars = st.one_of(
    st.none(), st.booleans(), st.integers(-10**6, 10**6),
    st.floats(allow_nan=False, allow_infinity=False, width=32), st.text(max_size=8),
)
json_keys = st.from_regex(r"[a-z]{1,4}", fullmatch=True)
json_values = st.recursive(
    json_scalars,
    lambda inner: st.one_of(st.lists(inner, max_size=3), st.dictionaries(json_keys, inner, max_size=4)),
    max_leaves=12,
)
json_objects = st.dictionaries(json_keys, json_values, min_size=1, max_size=6)


# -- scoring -----------------------------------------------------------------

AUTH = "http://publications.europa.eu/resource/authority/"
SCORED_DS = IRI("https://portal.example.org/dataset/prop")
_CONTACT = BNode("contact")

# every addition is valid against the bundled vocabularies and profile rules
DATASET_ADDITIONS = {
    "title": Literal("Weather station"),
    "description": Literal("Hourly observations"),
    "keywords": (Literal("weather"),),
    "themes": (IRI(AUTH + "data-theme/ENVI"),),
    "spatial": IRI("http://sws.geonames.org/3117735/"),
    "temporal": IRI("https://portal.example.org/period/2022"),
    "issued": Literal("2022-10-30T10:05:26", XSD.dateTime),
    "modified": Literal("2022-10-31T10:05:26", XSD.dateTime),
    "publisher": IRI("https://portal.example.org/org/upm"),
    "contact_point": _CONTACT,
    "access_rights": IRI(AUTH + "access-right/PUBLIC"),
    "version_info": Literal("1.0"),
    "landing_page": IRI("https://portal.example.org/landing"),
}
DISTRIBUTION_ADDITIONS = {
    "access_url": lambda i: IRI(f"https://data.example.org/{i}/access"),
    "download_url": lambda i: IRI(f"https://data.example.org/{i}/download"),
    "format": lambda i: IRI(AUTH + "file-type/" + ("CSV", "JSON", "XML")[i % 3]),
    "media_type": lambda i: IRI("http://www.iana.org/assignments/media-types/text/csv"),
    "license": lambda i: IRI(AUTH + "licence/CC_BY_4_0"),
    "rights": lambda i: Literal("Attribution required"),
    "byte_size": lambda i: Literal(str(1000 * i), XSD.decimal),
}


def build_dataset(fields: frozenset, dist_fields: tuple[frozenset, ...]) -> DcatDataset:
    kw = {k: DATASET_ADDITIONS[k] for k in fields}
    residue = Graph([Triple(_CONTACT, RDF_TYPE, VCARD.Organization),
                     Triple(_CONTACT, VCARD.fn, Literal("Ops"))] if "contact_point" in fields else [])
    dists = tuple(
        DcatDistribution(IRI(f"{SCORED_DS.value}/resource/{i}"), **{k: DISTRIBUTION_ADDITIONS[k](i) for k in fs})
        for i, fs in enumerate(dist_fields)
    )
    return DcatDataset(SCORED_DS, distributions=dists, residue=residue, **kw)


dataset_fields = st.frozensets(st.sampled_from(sorted(DATASET_ADDITIONS)))
distribution_fields = st.frozensets(st.sampled_from(sorted(DISTRIBUTION_ADDITIONS)))
statuses = st.one_of(st.none(), st.sampled_from([200, 204, 301, 302, 304, 399, 400, 404, 405, 500, 501, 503]))


@st.composite
def probe_maps(draw, n_dists: int):
    return {
        DISTRIBUTION_ADDITIONS[k](i).value: draw(statuses)
        for i in range(n_dists) for k in ("access_url", "download_url")
    }


@st.composite
def indicator_results(draw, dimension: str):
    weight = draw(st.integers(0, 50))
    awarded = draw(st.integers(0, weight))
    return IndicatorResult(f"i{draw(st.integers(0, 10**6))}", dimension, awarded, weight,
                           awarded / weight if weight else 0.0)


@st.composite
def quality_reports(draw):
    results = []
    for i, dim in enumerate(DIMENSIONS):
        for j, r in enumerate(draw(st.lists(indicator_results(dim), min_size=1, max_size=4))):
            results.append(IndicatorResult(f"{dim}-{j}", r.dimension, r.awarded, r.max, r.fraction))
    return QualityReport(f"https://portal.example.org/dataset/{draw(st.integers(0, 999))}", "synthetic", tuple(results))
