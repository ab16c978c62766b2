import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dcatforge.dcat import (
    DcatDataset, DcatDistribution, NotADataset, UnknownRuleSet, dataset_from_graph, dataset_to_graph,
    datasets_in, default_vocabulary, get_rule_set, parse_vocabulary, validate_profile, vocabulary_contains,
)
from dcatforge.rdf import DCAT, DCT, XSD, BNode, Graph, IRI, Literal, Triple, graph_isomorphic
from dcatforge.synthetic import random_dcat_graph

from conftest import fixture_dataset, fixture_graph

THEME = "http://publications.europa.eu/resource/authority/data-theme/"
DS = IRI("https://portal.example.org/dataset/1")


def test_vocabulary_exact_membership():
    themes = default_vocabulary("data-theme")
    assert vocabulary_contains(themes, IRI(THEME + "ENVI"))
    assert vocabulary_contains(themes, "ENVI")  # short code resolves against the base
    assert not vocabulary_contains(themes, IRI(THEME + "envi"))
    assert not vocabulary_contains(themes, IRI(THEME + "ENVI/"))


def test_file_type_flags():
    m = vocabulary_contains(default_vocabulary("file-types"), "CSV")
    assert m.member and m.open and m.machine_readable


def test_parse_vocabulary_rejects_bad_rows():
    with pytest.raises(ValueError):
        parse_vocabulary("x", "not-an-iri\n")
    with pytest.raises(ValueError):
        parse_vocabulary("x", "http://e.org/a\tcolour=1\n")
    with pytest.raises(ValueError):
        parse_vocabulary("x", "# only a comment\n")


def test_unknown_bundled_vocabulary():
    with pytest.raises(KeyError):
        default_vocabulary("nonexistent")


def test_distribution_validation():
    with pytest.raises(ValueError):
        DcatDistribution(BNode("d"), byte_size=Literal("-3"))
    with pytest.raises(ValueError):
        DcatDistribution(BNode("d"), media_type=Literal("csv"))
    assert DcatDistribution(BNode("d"), byte_size=Literal("42", XSD.decimal)).size == 42


def test_not_a_dataset():
    with pytest.raises(NotADataset):
        dataset_from_graph(Graph(), DS)


def test_fixture_fields():
    d = fixture_dataset("madrid_retiro_v2.rdf")
    assert d.title is not None and d.keywords and d.themes
    assert d.distributions and all(x.access_url for x in d.distributions)


@pytest.mark.parametrize("name", ["madrid_retiro_v1.rdf", "madrid_retiro_v2.rdf", "reference.rdf"])
def test_view_round_trip_fixture(name):
    g = fixture_graph(name)
    d = dataset_from_graph(g, datasets_in(g)[0])
    assert graph_isomorphic(dataset_to_graph(d), g.rooted_at(d.id))


@settings(max_examples=50)
@given(st.integers(0, 10_000))
def test_view_round_trip_generated(seed):
    g = random_dcat_graph(seed)
    d = dataset_from_graph(g, datasets_in(g)[0])
    assert graph_isomorphic(dataset_to_graph(d), g.rooted_at(d.id))


def test_multi_valued_fields_are_ordered():
    a = DcatDataset(DS, keywords=(Literal("b"), Literal("a")))
    b = DcatDataset(DS, keywords=(Literal("a"), Literal("b")))
    assert a == b


def _minimal(**kw):
    dist = DcatDistribution(IRI(DS.value + "/d"), access_url=IRI("https://x.example.org/"))
    base = dict(title=Literal("t"), description=Literal("d"), distributions=(dist,))
    base.update(kw)
    return DcatDataset(DS, **base)


def _rules(ds):
    return {v.rule for v in validate_profile(ds)}


def test_profile_clean_dataset():
    assert _rules(_minimal()) == set()


@pytest.mark.parametrize("change, rule", [
    ({"title": None}, "R1"),
    ({"description": None}, "R2"),
    ({"distributions": ()}, "R3"),
    ({"modified": Literal("2022-10-30")}, "R4"),
    ({"access_rights": IRI("http://example.org/open")}, "R5"),
    ({"contact_point": IRI("https://yoda.dit.upm.es/")}, "R6"),
    ({"themes": (IRI(THEME + "NOPE"),)}, "R7"),
])
def test_each_rule_fires(change, rule):
    assert _rules(_minimal(**change)) == {rule}


def test_described_contact_point_passes_r6():
    cp = BNode("c")
    residue = Graph([Triple(cp, IRI("http://www.w3.org/2006/vcard/ns#fn"), Literal("Ops"))])
    assert "R6" not in _rules(_minimal(contact_point=cp, residue=residue))


def test_fixtures_violate_only_r6():
    for name in ("madrid_retiro_v1.rdf", "madrid_retiro_v2.rdf"):
        assert _rules(fixture_dataset(name)) == {"R6"}
    assert _rules(fixture_dataset("reference.rdf")) == set()


def test_rule_sets():
    assert get_rule_set("dcatap-2.0.1-min").rules == get_rule_set("dcatap-2.1.0-min").rules
    with pytest.raises(UnknownRuleSet):
        get_rule_set("dcatap-3")
    with pytest.raises(UnknownRuleSet):
        validate_profile(_minimal(), "nope")


def test_distribution_urls():
    d = _minimal()
    assert d.urls() == {"https://x.example.org/"}
    assert DCAT.accessURL in {t.predicate for t in dataset_to_graph(d)}
    assert DCT.title in {t.predicate for t in dataset_to_graph(d)}
