"""``dcatforge`` command line.

Exit codes: 0 success, 1 operational or partial failure, 2 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
import uuid
from pathlib import Path

from . import __version__
from .clock import ENV_VAR, clock_from_env
from .dcat import NotADataset, dataset_from_graph, datasets_in
from .ingest import ConfigError, load_config, run_loop, run_once
from .mqa import MissingProbe, UnknownRubric, aggregate_catalog, evaluate, render_report, render_stats, report_to_dict
from .mqa.stats import EmptyFleet
from .oai import HarvestError, HttpTransport, OaiConfig, Repository, harvest, make_server
from .probe import LiveResolver, ProbeConfig, StubResolver, probe_all
from .rdf import DCAT, RDF_TYPE, FORMATS, BNode, Graph, IRI, RDFError, Triple, guess_format, parse, serialize
from .rdf.terms import WELL_KNOWN_PREFIXES
from .store import CatalogStore, StorageError, is_uuid

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _err(msg: str) -> None:
    print(f"dcatforge: {msg}", file=sys.stderr)


def _probe_config(args) -> ProbeConfig:
    if getattr(args, "live", False):
        return ProbeConfig(timeout_ms=args.timeout_ms, resolver=LiveResolver())
    if getattr(args, "probes", None):
        try:
            return ProbeConfig(resolver=StubResolver.from_file(args.probes))
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read probe table: {exc}") from exc
    # no probe source: every URL counts as unreachable
    return ProbeConfig(resolver=StubResolver({}))


def _clock():
    try:
        return clock_from_env()
    except ValueError as exc:
        raise UsageError(f"{ENV_VAR}: {exc}") from exc


def _score_reports(graph: Graph, args, only: str | None = None):
    subjects = [IRI(only)] if only else datasets_in(graph)
    if not subjects:
        raise UsageError("no dcat:Dataset found in the input")
    datasets = [dataset_from_graph(graph, s) for s in subjects]
    urls = set().union(*(d.urls() for d in datasets))
    probes = probe_all(urls, _probe_config(args))
    now = _clock()()
    return [evaluate(d, probes, args.rubric, args.rules, now=now) for d in datasets]


# -- commands ----------------------------------------------------------------


def cmd_score(args) -> int:
    path = Path(args.file)
    fmt = args.input_format or guess_format(str(path))
    try:
        graph = parse(path.read_text(encoding="utf-8"), fmt)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except RDFError as exc:
        raise UsageError(f"{path}: {exc}") from exc
    try:
        reports = _score_reports(graph, args, args.dataset)
    except NotADataset as exc:
        raise UsageError(str(exc)) from exc
    if args.format == "machine":
        docs = [report_to_dict(r) for r in reports]
        out = json.dumps(docs[0] if len(docs) == 1 else docs, indent=2, ensure_ascii=False) + "\n"
    else:
        out = "\n".join(render_report(r, "human") for r in reports)
    sys.stdout.write(out)
    return OK


def cmd_pipeline_run(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        raise UsageError(f"{args.config}: {exc}") from exc
    store_dir = args.store or cfg.store
    store = CatalogStore(store_dir, clock=_clock()) if store_dir else None
    if args.loop:
        summary = run_loop(cfg, store, _clock(), max_cycles=args.max_cycles)
    else:
        summary = run_once(cfg, store, _clock())
    sys.stdout.write(summary.render())
    return OK if summary.ok else FAILED


def _open_store(path: str, must_exist: bool = True) -> CatalogStore:
    if must_exist and not Path(path).is_dir():
        raise UsageError(f"store directory {path} does not exist")
    return CatalogStore(path, clock=_clock())


def cmd_serve(args) -> int:
    store = _open_store(args.store)
    cfg = OaiConfig(page_size=args.page_size, secret=args.secret.encode("utf-8"))
    server = make_server(Repository(store, cfg.retained_snapshots), cfg, args.host, args.port, clock=_clock())
    print(f"serving {server.url}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return OK


def _local_id(identifier: str) -> str:
    tail = identifier.rsplit(":", 1)[-1]
    return tail if is_uuid(tail) else str(uuid.uuid5(uuid.NAMESPACE_URL, identifier))


def cmd_harvest(args) -> int:
    try:
        records = harvest(args.endpoint, args.prefix, HttpTransport(args.timeout), set_spec=args.set,
                          from_=args.from_, until=args.until)
    except HarvestError as exc:
        _err(f"harvest failed, nothing written: {exc}")
        return FAILED
    store = _open_store(args.out, must_exist=False)
    for rec in records:
        if rec.metadata is None or len(rec.metadata) == 0:
            continue
        store.put(_local_id(rec.identifier), rec.sets[0] if rec.sets else "harvested", rec.metadata)
    print(f"harvested {len(records)} records into {args.out}")
    return OK


def catalog_graph(store: CatalogStore, catalog_iri: str) -> Graph:
    """All stored metadata under one dcat:Catalog node."""
    cat = IRI(catalog_iri)
    triples = [Triple(cat, RDF_TYPE, DCAT.Catalog)]
    for i, rec in enumerate(store.snapshot().records):
        g = rec.metadata
        # stored graphs share canonical blank labels; keep them apart
        g = g.relabel({b: BNode(f"r{i}{b.label}") for b in g.blank_nodes()})
        triples += list(g)
        triples += [Triple(cat, DCAT.dataset, ds) for ds in datasets_in(g)]
    prefixes = {k: WELL_KNOWN_PREFIXES[k] for k in ("dcat", "dct", "foaf", "owl", "rdf", "skos", "vcard", "xsd")}
    return Graph(triples, prefixes)


def cmd_export(args) -> int:
    store = _open_store(args.store)
    text = serialize(catalog_graph(store, args.catalog_iri), args.format)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return OK


def cmd_stats(args) -> int:
    store = _open_store(args.store)
    reports = []
    for rec in store.snapshot().records:
        reports += _score_reports(rec.metadata, args)
    try:
        stats = aggregate_catalog(reports)
    except EmptyFleet:
        _err("the store holds no datasets")
        return FAILED
    sys.stdout.write(render_stats(stats))
    return OK


# -- parser ------------------------------------------------------------------


def _add_probe_flags(p: argparse.ArgumentParser, required: bool) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--probes", metavar="FILE", help="stub table: URL and status (or 'none') per line")
    g.add_argument("--live", action="store_true", help="send real HTTP HEAD requests")
    p.add_argument("--timeout-ms", type=int, default=5000)


def _add_scoring_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rubric", default="mqa-405", help="bundled rubric name or a rubric JSON file")
    p.add_argument("--rules", default="dcatap-2.1.0-min", help="profile rule set")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dcatforge", description="DCAT-AP metadata pipeline toolkit")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="score a metadata file")
    p.add_argument("file")
    p.add_argument("--input-format", choices=FORMATS)
    p.add_argument("--dataset", help="score only this dataset IRI")
    p.add_argument("--format", choices=("human", "machine"), default="human")
    _add_probe_flags(p, required=True)
    _add_scoring_flags(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("pipeline", help="ingestion pipeline")
    psub = p.add_subparsers(dest="pipeline_command", required=True)
    r = psub.add_parser("run", help="fetch, map, generate, score and publish")
    r.add_argument("--config", required=True)
    r.add_argument("--store", help="override the store directory from the config")
    mode = r.add_mutually_exclusive_group()
    mode.add_argument("--once", action="store_true", help="run a single cycle (default)")
    mode.add_argument("--loop", action="store_true", help="keep polling on each source's interval")
    r.add_argument("--max-cycles", type=int, help="stop --loop after this many cycles")
    r.set_defaults(func=cmd_pipeline_run)

    p = sub.add_parser("serve", help="serve a store over OAI-PMH")
    p.add_argument("--store", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--page-size", type=int, default=100)
    p.add_argument("--secret", default="dcatforge-resumption", help="resumption token key")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("harvest", help="harvest an OAI-PMH endpoint into a store")
    p.add_argument("endpoint")
    p.add_argument("--out", required=True)
    p.add_argument("--prefix", default="dcat_ap")
    p.add_argument("--set")
    p.add_argument("--from", dest="from_")
    p.add_argument("--until")
    p.add_argument("--timeout", type=float, default=30.0)
    p.set_defaults(func=cmd_harvest)

    p = sub.add_parser("export", help="dump a store as one catalog document")
    p.add_argument("--store", required=True)
    p.add_argument("--format", choices=FORMATS, default="rdf-xml")
    p.add_argument("--catalog-iri", default="urn:dcatforge:catalog")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("stats", help="per-dimension score statistics for a store")
    p.add_argument("--store", required=True)
    _add_probe_flags(p, required=False)
    _add_scoring_flags(p)
    p.set_defaults(func=cmd_stats)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        _err(str(exc))
        return USAGE
    except MissingProbe as exc:
        _err(str(exc))
        return FAILED
    except (UnknownRubric, LookupError) as exc:
        _err(str(exc))
        return USAGE
    except StorageError as exc:
        _err(str(exc))
        return FAILED


if __name__ == "__main__":
    sys.exit(main())
