"""Deterministic synthetic sources for demos, scale runs and tests.

Three sources mirror the validation fleet: weather stations (122), city
sensors (60) and campus energy meters (20). Everything is seeded, so the
same call always yields the same records.
"""

from __future__ import annotations

import json
import random
from pathlib import Path
from typing import Any

import yaml

from .rdf import DCAT, DCT, FOAF, RDF_TYPE, VCARD, XSD, BNode, Graph, IRI, Literal, Triple
from .rdf.terms import WELL_KNOWN_PREFIXES

PORTAL = "https://portal-yoda.dit.upm.es/"
BROKER = "https://orion-ld.yoda.dit.upm.es/ngsi-ld/v1/entities/"
FLEET = {"aemet": 122, "smartsantander": 60, "ceimoncloa": 20}

_PLACES = [
    "ALBACETE", "ALICANTE", "ALMERIA", "AVILA", "BADAJOZ", "BARCELONA", "BILBAO", "BURGOS", "CACERES",
    "CADIZ", "CASTELLON", "CEUTA", "CIUDAD REAL", "CORDOBA", "CUENCA", "GIRONA", "GRANADA", "GUADALAJARA",
    "HUELVA", "HUESCA", "JAEN", "LEON", "LLEIDA", "LOGRONO", "LUGO", "MALAGA", "MELILLA", "MURCIA",
    "OURENSE", "OVIEDO", "PALENCIA", "PAMPLONA", "PONTEVEDRA", "SALAMANCA", "SEGOVIA", "SEVILLA", "SORIA",
    "TARRAGONA", "TERUEL", "TOLEDO", "VALENCIA", "VALLADOLID", "ZAMORA", "ZARAGOZA",
]
_SUFFIXES = ["AEROPUERTO", "CENTRO", "OBSERVATORIO", "PUERTO", "UNIVERSIDAD"]


# -- raw records -------------------------------------------------------------


def aemet_records(n: int = FLEET["aemet"], seed: int = 3195) -> list[dict[str, Any]]:
    """AEMET-style station observations. The first one is Madrid Retiro (3195)."""
    rng = random.Random(seed)
    names = ["MADRID RETIRO"] + [f"{p} {s}" for s in _SUFFIXES for p in _PLACES]
    codes = ["3195"] + [f"{c}{chr(65 + i % 26)}" for i, c in enumerate(rng.sample(range(1000, 9999), n))]
    out = []
    for i in range(n):
        out.append(
            {
                "idema": codes[i],
                "ubi": names[i],
                "lat": round(rng.uniform(36.0, 43.7), 4),
                "lon": round(rng.uniform(-9.2, 3.3), 4),
                "alt": rng.randint(0, 2400),
                "fint": f"2022-10-30T{rng.randint(0, 23):02d}:00:00",
                "ta": round(rng.uniform(-5, 35), 1),
                "hr": rng.randint(10, 100),
                "prec": round(rng.uniform(0, 20), 1),
                "vv": round(rng.uniform(0, 15), 1),
                "dv": rng.randint(0, 359),
                "operador": {"contacto": f"operador{i}@aemet.example", "telefono": f"+34 91 {rng.randint(100000, 999999)}"},
            }
        )
    return out


def smartsantander_records(n: int = FLEET["smartsantander"], seed: int = 60) -> list[dict[str, Any]]:
    rng = random.Random(seed)
    out = []
    for i in range(n):
        kind = rng.choice(["noise", "temperature", "light", "co2"])
        out.append(
            {
                "id": f"node-{1000 + i}",
                "kind": kind,
                "street": f"Calle {rng.choice(_PLACES).title()} {rng.randint(1, 90)}",
                "device": {
                    "serial": f"SN{rng.randint(10**7, 10**8 - 1)}",
                    "firmware": f"{rng.randint(1, 4)}.{rng.randint(0, 9)}",
                    "owner": {"name": f"Technician {i}", "email": f"tech{i}@santander.example"},
                },
                "readings": [
                    {"at": f"2022-10-30T10:{m:02d}:00", "value": round(rng.uniform(0, 100), 2)}
                    for m in range(0, 60, 20)
                ],
            }
        )
    return out


def ceimoncloa_records(n: int = FLEET["ceimoncloa"], seed: int = 20) -> list[dict[str, Any]]:
    rng = random.Random(seed)
    return [
        {
            "building": {"code": f"B{i:02d}", "name": f"Edificio {i + 1}"},
            "meter": {"id": f"EM-{i:03d}", "billing_account": f"ES{rng.randint(10**9, 10**10 - 1)}"},
            "kwh": round(rng.uniform(100, 5000), 1),
            "period": "2022-10",
        }
        for i in range(n)
    ]


RECORDS = {"aemet": aemet_records, "smartsantander": smartsantander_records, "ceimoncloa": ceimoncloa_records}


# -- mappings and templates --------------------------------------------------

AEMET_MAPPING = {
    "entity_type": "WeatherObserved",
    "id_path": "/idema",
    "assign": {
        "stationName": "/ubi",
        "stationCode": "/idema",
        "dateObserved": "/fint",
        "temperature": "/ta",
        "relativeHumidity": "/hr",
        "precipitation": "/prec",
        "windSpeed": "/vv",
        "windDirection": "/dv",
        "location/lat": "/lat",
        "location/lon": "/lon",
        "location/alt": "/alt",
    },
    "drop": ["/operador"],
}

SMARTSANTANDER_MAPPING = {
    "entity_type": "Device",
    "id_path": "/id",
    "assign": {"category": "/kind", "address": "/street", "device": "/device", "observations": "/readings"},
    "drop": ["/device/owner", "/device/serial"],
}

CEIMONCLOA_MAPPING = {
    "entity_type": "EnergyMeter",
    "id_path": "/meter/id",
    "assign": {"buildingCode": "/building/code", "buildingName": "/building/name", "consumption": "/kwh",
               "period": "/period"},
    "drop": ["/meter/billing_account"],
}


def _common(theme: str, keyword: str, org: str, org_name: str) -> dict[str, Any]:
    return {
        "keywords": {"constant": [keyword]},
        "themes": {"constant": [theme]},
        "spatial": {"constant": "http://publications.europa.eu/resource/authority/country/ESP"},
        "temporal": {"constant": {"start": "2022-07-18T00:00:00"}},
        "issued": {"context": "now"},
        "modified": {"context": "now"},
        "publisher": {"constant": {"iri": f"{PORTAL}organization/{org}", "name": org_name}},
        # a bare reference: scores 375, not 405, like the published record
        "contact_point": {"constant": "https://yoda.dit.upm.es/"},
        "access_rights": {"constant": "PUBLIC"},
        "version_info": {"constant": "1.0"},
        "distribution.access_url": {"extract": "id", "format": BROKER + "{}"},
        "distribution.download_url": {"extract": "id", "format": BROKER + "{}?format=json"},
        "distribution.format": {"constant": "JSON"},
        "distribution.media_type": {"constant": "application/json"},
        "distribution.license": {"constant": "CC_BY_4_0"},
        "distribution.byte_size": {"constant": 2048},
    }


AEMET_TEMPLATE = {
    "title": {"extract": "stationName", "format": "{}_{stationCode}", "slug": True},
    "description": {
        "extract": "stationName",
        "format": "Weather of the {} station (AEMET {stationCode}): temperature, precipitation, humidity and wind.",
    },
    "identifier": {"extract": "stationCode"},
    "landing_page": {"extract": "stationCode", "format": PORTAL + "station/{}"},
    "distribution.rights": {"constant": "https://www.aemet.es/en/nota_legal"},
    **_common("ENVI", "weather", "aemet", "AEMET"),
}

SMARTSANTANDER_TEMPLATE = {
    "title": {"extract": "id", "pattern": "node-(\\d+)", "format": "santander_{category}_{}"},
    "description": {"extract": "address", "format": "City sensor readings ({category}) at {}."},
    "distribution.rights": {"constant": "https://www.smartsantander.eu/"},
    **_common("TRAN", "smart city", "smartsantander", "SmartSantander"),
}

CEIMONCLOA_TEMPLATE = {
    "title": {"extract": "buildingName", "format": "energy_{}", "slug": True},
    "description": {"extract": "buildingName", "format": "Monthly electricity consumption of {} ({period})."},
    "distribution.rights": {"constant": "https://www.campusmoncloa.es/"},
    **_common("ENER", "energy", "ceimoncloa", "CEI Moncloa"),
}

MAPPINGS = {"aemet": AEMET_MAPPING, "smartsantander": SMARTSANTANDER_MAPPING, "ceimoncloa": CEIMONCLOA_MAPPING}
TEMPLATES = {"aemet": AEMET_TEMPLATE, "smartsantander": SMARTSANTANDER_TEMPLATE, "ceimoncloa": CEIMONCLOA_TEMPLATE}


def demo_config(data_dir: str = "data", probes: str | None = "probes.tsv", store: str = "store",
                counts: dict[str, int] | None = None) -> dict[str, Any]:
    counts = counts or FLEET
    doc: dict[str, Any] = {
        "portal_base_iri": PORTAL,
        "rule_set": "dcatap-2.1.0-min",
        "rubric": "mqa-405",
        "min_score": 300,
        "store": store,
        "templates": {k: TEMPLATES[k] for k in counts},
        "sources": [
            {
                "id": k,
                "organization": k,
                "endpoint": f"{data_dir}/{k}.json",
                "interval": 300,
                "mapping": MAPPINGS[k],
                "template": k,
            }
            for k in counts
        ],
    }
    if probes:
        doc["probes"] = {"stub": probes}
    return doc


def write_demo(root: str | Path, counts: dict[str, int] | None = None, status: str = "200") -> Path:
    """Write payloads, a probe stub covering every generated URL, and a config."""
    from .ingest import apply_mapping, config_from_dict
    from .ingest.mapping import MappingSpec

    root = Path(root)
    counts = counts or FLEET
    (root / "data").mkdir(parents=True, exist_ok=True)
    lines = ["# every distribution URL of the demo fleet"]
    for k, n in counts.items():
        records = RECORDS[k](n)
        (root / "data" / f"{k}.json").write_text(json.dumps(records, indent=1), encoding="utf-8")
        spec = MappingSpec.from_dict(MAPPINGS[k])
        for r in records:
            eid = apply_mapping(spec, r).id
            lines += [f"{BROKER}{eid}\t{status}", f"{BROKER}{eid}?format=json\t{status}"]
    (root / "probes.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    doc = demo_config(counts=counts)
    path = root / "pipeline.yaml"
    path.write_text(yaml.safe_dump(doc, sort_keys=False, allow_unicode=True), encoding="utf-8")
    config_from_dict(doc, root)  # fail early on a broken demo
    return path


# -- random DCAT graphs --------------------------------------------------------

_TEXT = ["weather", "Niño", "tab\there", "line\nbreak", "quote \" and 'apos'", "<tag> & amp", "  spaced  ",
         "ümlaut", "emoji 🌧", "back\\slash", "", "1.0", "multi\n\nline"]


def random_dcat_graph(seed: int) -> Graph:
    """A DCAT-shaped graph with blank nodes, datatypes and language tags."""
    rng = random.Random(seed)
    ds = IRI(f"{PORTAL}dataset/{seed:08d}-0000-4000-8000-{rng.randrange(16**12):012x}")
    t: list[Triple] = [Triple(ds, RDF_TYPE, DCAT.Dataset)]
    t.append(Triple(ds, DCT.title, Literal(rng.choice(_TEXT), language=rng.choice([None, "en", "es", "en-GB"]))))
    if rng.random() < 0.8:
        t.append(Triple(ds, DCT.description, Literal(rng.choice(_TEXT))))
    for k in rng.sample(_TEXT, rng.randint(0, 3)):
        t.append(Triple(ds, DCAT.keyword, Literal(k)))
    for theme in rng.sample(["ENVI", "TRAN", "ENER", "ECON"], rng.randint(0, 2)):
        t.append(Triple(ds, DCAT.theme, IRI("http://publications.europa.eu/resource/authority/data-theme/" + theme)))
    if rng.random() < 0.7:
        t.append(Triple(ds, DCT.modified, Literal(f"2022-10-{rng.randint(1, 28):02d}T10:00:00", XSD.dateTime)))
    if rng.random() < 0.6:
        period = BNode("p")
        t += [Triple(ds, DCT.temporal, period), Triple(period, RDF_TYPE, DCT.PeriodOfTime),
              Triple(period, DCAT.startDate, Literal("2022-01-01", XSD.date))]
    contact = BNode("c") if rng.random() < 0.5 else IRI("https://example.org/contact")
    t += [Triple(ds, DCAT.contactPoint, contact)]
    if isinstance(contact, BNode):
        t += [Triple(contact, RDF_TYPE, VCARD.Organization), Triple(contact, VCARD.fn, Literal("Ops"))]
    if rng.random() < 0.3:
        # shared blank node: referenced twice, so it cannot be nested
        shared = BNode("shared")
        t += [Triple(ds, FOAF.page, shared), Triple(ds, DCT.relation, shared),
              Triple(shared, FOAF.name, Literal("shared", language="en"))]
    if rng.random() < 0.2:
        # a two-node blank cycle
        a, b = BNode("ca"), BNode("cb")
        t += [Triple(a, DCT.relation, b), Triple(b, DCT.relation, a), Triple(ds, DCT.hasPart, a)]
    for i in range(rng.randint(0, 3)):
        dist = BNode(f"d{i}") if rng.random() < 0.5 else IRI(f"{ds.value}/resource/{i}")
        t += [Triple(ds, DCAT.distribution, dist), Triple(dist, RDF_TYPE, DCAT.Distribution),
              Triple(dist, DCAT.accessURL, IRI(f"https://data.example.org/{seed}/{i}?q=a&b=c"))]
        if rng.random() < 0.5:
            t.append(Triple(dist, DCAT.byteSize, Literal(str(rng.randint(0, 10**6)), XSD.decimal)))
        if rng.random() < 0.5:
            t.append(Triple(dist, DCAT.mediaType, IRI("http://www.iana.org/assignments/media-types/text/csv")))
    if rng.random() < 0.3:
        t.append(Triple(ds, IRI("http://example.org/vocab#custom-prop"), Literal(str(rng.random()), XSD.double)))
    if rng.random() < 0.2:
        t.append(Triple(ds, IRI("urn:example:prop/x"), Literal("opaque predicate namespace")))
    return Graph(t, {k: WELL_KNOWN_PREFIXES[k] for k in ("dcat", "dct", "foaf", "vcard", "xsd")})
