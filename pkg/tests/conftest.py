from __future__ import annotations

from datetime import datetime, timezone
from importlib import resources

import pytest
from hypothesis import HealthCheck, settings

from dcatforge.dcat import dataset_from_graph, datasets_in
from dcatforge.ingest import load_config, run_once
from dcatforge.probe import load_probe_table
from dcatforge.rdf import parse
from dcatforge.store import CatalogStore
from dcatforge.synthetic import write_demo

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

NOW = datetime(2022, 10, 30, 10, 5, 26, tzinfo=timezone.utc)
FIXTURES = resources.files("dcatforge.fixtures")


def fixture_text(name: str) -> str:
    return FIXTURES.joinpath(name).read_text(encoding="utf-8")


def fixture_graph(name: str):
    return parse(fixture_text(name))


def fixture_dataset(name: str):
    g = fixture_graph(name)
    return dataset_from_graph(g, datasets_in(g)[0])


def fixture_probes(name: str):
    return load_probe_table(FIXTURES.joinpath(name))


@pytest.fixture(scope="session")
def demo_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("demo")
    write_demo(root)
    return root


@pytest.fixture(scope="session")
def fleet_store(demo_dir):
    """The 202-dataset validation fleet, published once per session."""
    cfg = load_config(demo_dir / "pipeline.yaml")
    store = CatalogStore(demo_dir / "store", clock=lambda: NOW)
    summary = run_once(cfg, store, lambda: NOW)
    assert summary.ok, summary.failures
    return store
