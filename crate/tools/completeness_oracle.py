#!/usr/bin/env python3
"""Independent completeness computation for the golden CSVs.

Reimplements point selection, name splitting, facet lookup, the three-way
labelling and gap tallying straight from the input CSVs, the way a
spreadsheet would, and writes the expected report files.

    python3 tools/completeness_oracle.py fixtures/mini
"""

import csv
import os
import re
import sys
from collections import defaultdict
from fractions import Fraction

SYSTEM_ORDER = ["AHU", "Chiller", "Boiler", "Loop", "TerminalUnit"]
SYSTEM_LABEL = {"AHU": "AHU", "Chiller": "Chiller", "Boiler": "Boiler", "Loop": "Loop", "TerminalUnit": "Terminal Units"}
FACET_ORDER = ["equipmentClass", "equipmentType", "pointClass", "measurementControlType", "service", "modifier"]
LABEL_ORDER = ["Maps", "Partially Maps", "Does Not Map"]
FACET_GAP_TYPE = {
    "pointClass": "measure",
    "equipmentClass": "equipment",
    "equipmentType": "equipment",
    "service": "medium",
    "measurementControlType": "concept",
}


def split_name(name):
    # regex form of the splitting rules, kept apart from the generator's loop
    parts = []
    for chunk in re.split(r"[^A-Za-z0-9]+", name):
        parts += re.findall(r"[A-Z]+(?=[A-Z][a-z])|[A-Z]?[a-z]+|[A-Z]+|[0-9]+", chunk)
    return parts


def read_rows(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(line for line in f if not line.lstrip().startswith("#")))


def read_alignment(paths):
    table = {}
    for p in paths:
        for r in read_rows(p):
            key = (r["token"].strip().lower(), r["facet"].strip(), r["ontology"].strip())
            table[key] = (r["token"].strip(), r["target"].strip() != "")
    return table


def select(points, exclusions):
    by_name = sorted(enumerate(points), key=lambda ip: (ip[1]["name"], ip[0]))
    tuples, words, chosen = defaultdict(set), defaultdict(set), []
    for _, p in by_name:
        if p["system"] not in SYSTEM_ORDER:
            continue
        t = (p["equipment_class"], p["equipment_type"], p["point_class"], p["mct"], p["service"])
        w = {x.lower() for x in split_name(p["name"])}
        if p["name"] in exclusions or t in tuples[p["system"]] or w <= words[p["system"]]:
            continue
        tuples[p["system"]].add(t)
        words[p["system"]] |= w
        chosen.append(p)
    return chosen


def classify(p, table, ont):
    facets = {}
    gaps = []
    todo = []

    def look(token, facet):
        if token == "":
            return "n/a"
        hit = table.get((token.lower(), facet, ont))
        if hit is None:
            todo.append((facet, token))
        if hit is None or not hit[1]:
            gaps.append((FACET_GAP_TYPE[facet], token))
            return "gap"
        return "mapped"

    facets["ec"] = look(p["equipment_class"], "equipmentClass")
    facets["pc"] = look(p["point_class"], "pointClass")
    facets["et"] = look(p["equipment_type"], "equipmentType")
    facets["mct"] = look(p["mct"], "measurementControlType")
    facets["svc"] = look(p["service"], "service")
    seen = set()
    for w in split_name(p["name"]):
        if w.lower() in seen:
            continue
        seen.add(w.lower())
        hit = table.get((w.lower(), "modifier", ont))
        if hit is not None and not hit[1]:
            gaps.append(("concept", hit[0]))
            facets["mct"] = "gap"

    n_gap = sum(v == "gap" for v in facets.values())
    if n_gap == 0:
        lab = "Maps"
    elif facets["ec"] == "mapped" and facets["pc"] == "mapped" and [facets[k] for k in ("et", "mct", "svc")].count("gap") == 1:
        lab = "Partially Maps"
    else:
        lab = "Does Not Map"
    return lab, set(gaps), todo


def pct(num, den):
    if den == 0:
        return 0
    x = Fraction(100 * num, den)
    return int(x + Fraction(1, 2))  # half-up for non-negative values


def write(path, header, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def main(fixture):
    points = read_rows(os.path.join(fixture, "dataset.csv"))
    for p in points:
        for k in ("equipment_type", "service", "mct"):
            p[k] = (p.get(k) or "").strip()
        p["mct"] = p["mct"] or "none"
        p["system"] = {"terminalunit": "TerminalUnit", "ahu": "AHU"}.get(p["system"].lower(), p["system"])
    exclusions = set()
    excl_path = os.path.join(fixture, "exclusions.txt")
    if os.path.exists(excl_path):
        exclusions = {l.strip() for l in open(excl_path) if l.strip() and not l.startswith("#")}
    align_dir = os.path.join(fixture, "..", "alignment")
    table = read_alignment([os.path.join(align_dir, "haystack.csv"), os.path.join(align_dir, "brick.csv")])

    chosen = select(points, exclusions)
    out = os.path.join(fixture, "golden")
    os.makedirs(out, exist_ok=True)
    unresolved_rows = []
    for ont in ("haystack", "brick"):
        results = [(p, *classify(p, table, ont)) for p in chosen]
        size = len(results)
        rows, counts = [], []
        groups = [(SYSTEM_LABEL[s], [r for r in results if r[0]["system"] == s]) for s in SYSTEM_ORDER]
        groups = [g for g in groups if g[1]] + [("Total", results)]
        for name, rs in groups:
            m = sum(r[1] == "Maps" for r in rs)
            pm = sum(r[1] == "Partially Maps" for r in rs)
            d = len(rs) - m - pm
            rows.append([name, pct(m, len(rs)), pct(m + pm, len(rs))])
            counts.append([name, len(rs), m, pm, d])
        write(os.path.join(out, f"completeness_{ont}.csv"), ["system", "pct_maps", "pct_maps_or_partial"], rows)
        write(os.path.join(out, f"completeness_{ont}_counts.csv"),
              ["system", "selected", "maps", "partially_maps", "does_not_map"], counts)

        tally = defaultdict(set)
        todo = defaultdict(set)
        for i, (p, lab, gaps, td) in enumerate(results):
            for gt, concept in gaps:
                tally[(gt, concept, lab)].add(i)
            for item in td:
                todo[item].add(i)
        recs = []
        for (gt, concept, lab), idx in tally.items():
            sig = len(idx) * 100 >= 2 * size * 1  # count/size >= 2%
            recs.append((gt, concept, lab, len(idx), sig))
        # gap type by name, significant first, Does Not Map before Partially Maps, ascending count
        recs.sort(key=lambda r: (r[0], not r[4], -LABEL_ORDER.index(r[2]), r[3], r[1]))
        write(os.path.join(out, f"gaps_{ont}.csv"), ["gap_type", "significant", "classification", "concept", "count"],
              [[r[0], "Yes" if r[4] else "No", r[2], r[1], r[3]] for r in recs])
        for (facet, token), idx in sorted(todo.items(), key=lambda kv: (FACET_ORDER.index(kv[0][0]), kv[0][1])):
            unresolved_rows.append([ont, facet, token, len(idx)])
    write(os.path.join(out, "unresolved_tokens.csv"), ["ontology", "facet", "token", "points"], unresolved_rows)
    print(f"{len(chosen)} representative points; goldens in {out}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "fixtures/mini")
