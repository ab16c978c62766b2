from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

DIMENSIONS = ("Findability", "Accessibility", "Interoperability", "Reusability", "Contextuality")
DEFAULT_RUBRIC = "mqa-405"


class UnknownRubric(LookupError):
    pass


@dataclass(frozen=True)
class Indicator:
    id: str
    dimension: str
    weight: int
    check: str
    label: str = ""

    def __post_init__(self):
        if self.dimension not in DIMENSIONS:
            raise ValueError(f"indicator {self.id!r}: unknown dimension {self.dimension!r}")
        if not isinstance(self.weight, int) or self.weight < 0:
            raise ValueError(f"indicator {self.id!r}: weight must be a non-negative integer")


@dataclass(frozen=True)
class Rubric:
    id: str
    indicators: tuple[Indicator, ...]
    dimension_max: tuple[tuple[str, int], ...]

    def __post_init__(self):
        ids = [i.id for i in self.indicators]
        if len(ids) != len(set(ids)):
            raise ValueError(f"rubric {self.id!r}: indicator ids are not unique")
        declared = dict(self.dimension_max)
        for name, total in self.dimension_totals().items():
            if declared.get(name, total) != total:
                raise ValueError(
                    f"rubric {self.id!r}: {name} indicators sum to {total}, declared {declared[name]}"
                )

    @property
    def total(self) -> int:
        return sum(i.weight for i in self.indicators)

    def dimension_totals(self) -> dict[str, int]:
        out = {name: 0 for name, _ in self.dimension_max}
        for ind in self.indicators:
            out[ind.dimension] = out.get(ind.dimension, 0) + ind.weight
        return out

    def dimensions(self) -> list[str]:
        names = [name for name, _ in self.dimension_max]
        names += [i.dimension for i in self.indicators if i.dimension not in names]
        return list(dict.fromkeys(names))

    def indicator(self, indicator_id: str) -> Indicator:
        for ind in self.indicators:
            if ind.id == indicator_id:
                return ind
        raise KeyError(indicator_id)


def rubric_from_dict(doc: dict) -> Rubric:
    return Rubric(
        id=doc["id"],
        indicators=tuple(
            Indicator(i["id"], i["dimension"], i["weight"], i.get("check", i["id"]), i.get("label", ""))
            for i in doc["indicators"]
        ),
        dimension_max=tuple((d["name"], d["max"]) for d in doc.get("dimensions", ())),
    )


def load_rubric(path: str | Path) -> Rubric:
    return rubric_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


@lru_cache(maxsize=None)
def get_rubric(name: str = DEFAULT_RUBRIC) -> Rubric:
    """A bundled rubric by name, or a rubric JSON file by path."""
    if name.endswith(".json") and Path(name).exists():
        return load_rubric(name)
    ref = resources.files(__package__).joinpath("data", f"{name}.json")
    if not ref.is_file():
        raise UnknownRubric(f"no rubric named {name!r}")
    return rubric_from_dict(json.loads(ref.read_text(encoding="utf-8")))
