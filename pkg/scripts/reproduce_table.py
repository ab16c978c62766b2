#!/usr/bin/env python3
"""Print the Madrid Retiro quality table: both evaluations side by side."""

from importlib import resources

from dcatforge.dcat import dataset_from_graph, datasets_in
from dcatforge.mqa import evaluate, get_rubric
from dcatforge.probe import load_probe_table
from dcatforge.rdf import parse

FIXTURES = resources.files("dcatforge.fixtures")


def report(version: str):
    g = parse(FIXTURES.joinpath(f"madrid_retiro_{version}.rdf").read_text(encoding="utf-8"))
    probes = load_probe_table(FIXTURES.joinpath(f"probes_{version}.tsv"))
    return evaluate(dataset_from_graph(g, datasets_in(g)[0]), probes)


def main() -> None:
    first, second = report("v1"), report("v2")
    rubric = get_rubric()
    print(f"{'indicator':<20}{'points':>7}{'1st':>6}{'2nd':>6}")
    for dim, maximum in rubric.dimension_totals().items():
        print(f"-- {dim} ({maximum} points)")
        for ind in rubric.indicators:
            if ind.dimension != dim:
                continue
            marks = ["✓" if r.result(ind.id).passed else "✗" for r in (first, second)]
            print(f"{ind.label or ind.id:<20}{ind.weight:>7}{marks[0]:>6}{marks[1]:>6}")
    print(f"{'Total':<20}{rubric.total:>7}{first.total:>6}{second.total:>6}")


if __name__ == "__main__":
    main()
