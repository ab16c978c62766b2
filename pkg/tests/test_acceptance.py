"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import time
from contextlib import contextmanager

from hypothesis import given, settings
from hypothesis import strategies as st

from dcatforge.dcat import dataset_from_graph, datasets_in
from dcatforge.ingest import GenerationContext, MappingSpec, MetadataTemplate, apply_mapping, generate_metadata
from dcatforge.mqa import PROBE_FAILURE, evaluate, get_rubric, render_report
from dcatforge.oai import HttpTransport, handle_request, OaiConfig, Repository, harvest_pages, make_server, serve_in_thread
from dcatforge.probe import load_probe_table
from dcatforge.rdf import graph_isomorphic, parse, serialize
from dcatforge.synthetic import AEMET_MAPPING, AEMET_TEMPLATE, PORTAL, aemet_records, random_dcat_graph

import test_ingest
import test_mqa
import test_oai
from conftest import NOW, fixture_dataset, fixture_graph, fixture_probes
from oai_grammar import error_codes, validate_response
from strategies import quality_reports


@contextmanager
def criterion(request, number: int, title: str, budget_s: float):
    start = time.perf_counter()
    ok = False
    try:
        yield
        elapsed = time.perf_counter() - start
        ok = elapsed < budget_s
        assert ok, f"took {elapsed:.2f}s, budget {budget_s}s"
    finally:
        elapsed = time.perf_counter() - start
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({elapsed:.2f}s, budget {budget_s}s)"
        with request.config.pluginmanager.getplugin("capturemanager").global_and_fixture_disabled():
            print("\n" + line)


def test_1_rubric_integrity(request):
    with criterion(request, 1, "rubric totals 405 with the five dimension maxima", 1.0):
        rubric = get_rubric()
        assert rubric.total == 405
        assert rubric.dimension_totals() == {"Findability": 100, "Accessibility": 100, "Interoperability": 110,
                                             "Reusability": 75, "Contextuality": 20}


def test_2_madrid_retiro_reproduction(request):
    with criterion(request, 2, "Madrid Retiro v1 = 265, v2 = 375, indicator marks match", 1.0):
        for column, (version, total) in enumerate((("v1", 265), ("v2", 375))):
            report = evaluate(fixture_dataset(f"madrid_retiro_{version}.rdf"), fixture_probes(f"probes_{version}.tsv"))
            assert report.total == total and report.max == 405
            marks = {r.indicator: r.passed for r in report.results}
            assert marks == {k: v[column] for k, v in test_mqa.TABLE.items()}
            assert not marks["dcat-compliant"]


def test_3_failure_message(request):
    with criterion(request, 3, "v1 report carries the probe failure message verbatim", 1.0):
        text = render_report(evaluate(fixture_dataset("madrid_retiro_v1.rdf"), fixture_probes("probes_v1.tsv")))
        assert "Responded status code of the HTTP HEAD request is not in the 200 or 300 range. " \
               "No weight assigned" in text
        assert PROBE_FAILURE in text


def test_4_rdf_round_trip(request):
    with criterion(request, 4, "RDF/XML and Turtle round trips are isomorphic (fixtures + 20 graphs)", 5.0):
        graphs = [fixture_graph(n) for n in ("madrid_retiro_v1.rdf", "madrid_retiro_v2.rdf", "reference.rdf")]
        graphs += [random_dcat_graph(seed) for seed in range(20)]
        for g in graphs:
            for fmt in ("rdf-xml", "turtle"):
                assert graph_isomorphic(parse(serialize(g, fmt), fmt), g)


def test_5_template_scale_up(request):
    with criterion(request, 5, "one AEMET template over 122 stations yields 122 datasets scoring 375", 10.0):
        spec, template = MappingSpec.from_dict(AEMET_MAPPING), MetadataTemplate.from_dict(AEMET_TEMPLATE)
        records = aemet_records(122)
        ctx = GenerationContext(NOW, "aemet", len(records), PORTAL)
        datasets = [generate_metadata(template, apply_mapping(spec, r), ctx) for r in records]
        assert len({d.id for d in datasets}) == 122
        probes = {u: 200 for d in datasets for u in d.urls()}  # every probe answers like the second evaluation
        assert [evaluate(d, probes).total for d in datasets] == [375] * 122


def test_6_oai_end_to_end(request, fleet_store, demo_dir):
    with criterion(request, 6, "202-record harvest: pages 100/100/2, isomorphic, scores unchanged", 30.0):
        snapshot = fleet_store.snapshot()
        assert len(snapshot) == 202
        server = make_server(Repository(fleet_store), OaiConfig(page_size=100), "127.0.0.1", 0)
        serve_in_thread(server)
        try:
            pages = list(harvest_pages(server.url, "dcat_ap", HttpTransport(10)))
        finally:
            server.shutdown()
            server.server_close()
        assert [len(p) for p in pages] == [100, 100, 2]
        records = [r for p in pages for r in p]
        ids = [r.identifier.rsplit(":", 1)[1] for r in records]
        assert len(set(ids)) == 202 and set(ids) == {r.id for r in snapshot.records}
        probes = load_probe_table(demo_dir / "probes.tsv")
        for rec, local in zip(records, ids):
            source = snapshot.get(local).metadata
            assert graph_isomorphic(rec.metadata, source)
            before = evaluate(dataset_from_graph(source, datasets_in(source)[0]), probes)
            after = evaluate(dataset_from_graph(rec.metadata, datasets_in(rec.metadata)[0]), probes)
            assert after.results == before.results and after.total == 375


def _run_property(test_fn, strategy, examples):
    calls = []

    @settings(max_examples=examples, database=None)
    @given(strategy)
    def run(case):
        calls.append(1)
        test_fn(*case)

    run()
    return len(calls)


def test_7_property_suites(request):
    with criterion(request, 7, "property suites: monotonicity 500, proration 200, pagination 100, "
                               "stats 50, redaction 200", 60.0):
        counts = {
            "monotonicity": _run_property(test_mqa.check_monotone, test_mqa.monotonicity_cases(), 500),
            "proration": _run_property(test_mqa.check_proration, test_mqa.proration_cases(), 200),
            "pagination": _run_property(test_oai.check_pagination, test_oai.pagination_cases(), 100),
            "stats": _run_property(test_mqa.check_stats_oracle,
                                   st.tuples(st.lists(quality_reports(), min_size=50, max_size=50)), 50),
            "redaction": _run_property(test_ingest.check_redaction, test_ingest.redaction_cases(), 200),
        }
        targets = {"monotonicity": 500, "proration": 200, "pagination": 100, "stats": 50, "redaction": 200}
        assert counts == targets, counts


def test_8_protocol_errors(request, fleet_store):
    with criterion(request, 8, "six OAI error codes returned in-band as schema-valid XML", 1.0):
        repo = Repository(fleet_store)
        for code, params in test_oai.ERROR_REQUESTS.items():
            resp = handle_request(repo, params, OaiConfig(), lambda: NOW)
            assert resp.status == 200
            assert error_codes(validate_response(resp.body)) == [code]
        assert set(test_oai.ERROR_REQUESTS) == {"badVerb", "badArgument", "badResumptionToken", "cannotDisseminateFormat",
                                       "idDoesNotExist", "noRecordsMatch"}
