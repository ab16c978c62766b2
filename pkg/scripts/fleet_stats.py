#!/usr/bin/env python3
"""Per-dimension score statistics for the synthetic fleet.

Usage: fleet_stats.py [--unreachable FRACTION] [--seed N]

A fraction of distribution URLs can be made to fail their probe, which
spreads the Accessibility scores out.
"""

import argparse
import random
import tempfile
from pathlib import Path

from dcatforge.dcat import dataset_from_graph, datasets_in
from dcatforge.ingest import load_config, run_once
from dcatforge.mqa import aggregate_catalog, evaluate, render_stats
from dcatforge.probe import load_probe_table
from dcatforge.store import CatalogStore
from dcatforge.synthetic import write_demo


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--unreachable", type=float, default=0.0)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    with tempfile.TemporaryDirectory() as tmp:
        cfg = load_config(write_demo(Path(tmp)))
        store = CatalogStore(cfg.store)
        run_once(cfg, store)
        rng = random.Random(args.seed)
        probes = {u: (None if rng.random() < args.unreachable else s)
                  for u, s in load_probe_table(Path(tmp) / "probes.tsv").items()}
        reports = []
        for rec in store.snapshot().records:
            g = rec.metadata
            reports.append(evaluate(dataset_from_graph(g, datasets_in(g)[0]), probes))
    print(render_stats(aggregate_catalog(reports)), end="")


if __name__ == "__main__":
    main()
