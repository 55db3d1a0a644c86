#!/usr/bin/env python3
"""Independent oracle counts for the vendored Brick schema, computed with rdflib.

usage: brick_oracle.py <Brick.ttl> <oracle.json>
"""
import json
import sys

import rdflib
from rdflib.namespace import OWL, RDF, RDFS

BRICK = "https://brickschema.org/schema/1.1/Brick#"
ROOTS = ["Equipment", "Location", "Measurable", "Point"]


def main():
    src, out = sys.argv[1:3]
    g = rdflib.Graph()
    g.parse(src, format="turtle")
    B = rdflib.Namespace(BRICK)

    parents = {}
    for s, o in g.subject_objects(RDFS.subClassOf):
        if isinstance(s, rdflib.URIRef) and isinstance(o, rdflib.URIRef):
            parents.setdefault(s, set()).add(o)

    def ancestors(c):
        seen, stack = set(), [c]
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            stack.extend(parents.get(x, ()))
        return seen

    roots = {B[r] for r in ROOTS}
    nodes = set(parents) | {p for ps in parents.values() for p in ps}
    classes = sorted(str(c) for c in nodes if ancestors(c) & roots)
    per_root = {
        r: sum(1 for c in nodes if B[r] in ancestors(c)) for r in ROOTS
    }

    rels = {}
    for p in g.subjects(RDF.type, OWL.ObjectProperty):
        if str(p).startswith(BRICK):
            inv = g.value(p, OWL.inverseOf)
            rels[str(p)[len(BRICK):]] = str(inv)[len(BRICK):] if inv is not None else None
    # close the inverse relation over both directions
    pairs = set()
    for a, b in rels.items():
        if b is not None:
            pairs.add(tuple(sorted((a, b))))

    sat = B["Supply_Air_Temperature_Sensor"]
    tags = sorted(str(t).split("#", 1)[1] for t in g.objects(sat, B.hasAssociatedTag))

    oracle = {
        "source": src.rsplit("/", 1)[-1],
        "triple_count": len(g),
        "class_count_under_roots": len(classes),
        "classes_per_root": per_root,
        "relationships": dict(sorted(rels.items())),
        "inverse_pair_count": len(pairs),
        "supply_air_temperature_sensor_tags": tags,
        "supply_air_temperature_sensor_reaches_point": B.Point in ancestors(sat),
        "heat_exchanger_is_class": (B.Heat_Exchanger, RDF.type, OWL.Class) in g,
        "version": str(g.value(rdflib.URIRef("https://brickschema.org/schema/1.1/Brick"),
                               rdflib.URIRef("http://purl.org/dc/terms#version"))),
    }
    with open(out, "w", encoding="utf-8", newline="\n") as f:
        json.dump(oracle, f, indent=2, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main()
