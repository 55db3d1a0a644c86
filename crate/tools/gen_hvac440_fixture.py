#!/usr/bin/env python3
"""Generate the 440-point synthetic dataset in fixtures/hvac440/.

Per-system label counts were back-solved from the published completeness
percentages (see COUNTS). Each point's facets are drawn from the curated
alignment tables so that its Haystack and Brick labels land in a chosen
(haystack, brick) cell. The script re-derives every label from the alignment
CSVs with its own small classifier and refuses to write if any count is off.

Run from the workspace root:  python3 tools/gen_hvac440_fixture.py
"""

import csv
import itertools
import os
import random
import sys

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
OUT = os.path.join(ROOT, "fixtures", "hvac440")
ALIGN = os.path.join(ROOT, "fixtures", "alignment")

# system -> (size, haystack (maps, partial, dnm), brick (maps, partial, dnm))
COUNTS = {
    "AHU": (174, (55, 61, 58), (98, 44, 32)),
    "Chiller": (67, (36, 11, 20), (37, 3, 27)),
    "Boiler": (47, (35, 6, 6), (35, 1, 11)),
    "Loop": (73, (20, 20, 33), (31, 25, 17)),
    "TerminalUnit": (79, (43, 18, 18), (59, 7, 13)),
}

PREFIX = {"AHU": "AHU", "Chiller": "CH", "Boiler": "B", "Loop": "LP", "TerminalUnit": "VAV"}

MAPPED_PC = [
    "Temperature", "Pressure", "Flow", "Humidity", "Speed", "Power", "Energy", "Frequency",
    "Voltage", "Current", "CO2", "Enthalpy", "Run Status", "Enable", "Occupancy", "Level",
]
MCTS = ["AI", "AO", "DI", "DO"]

FREE = {
    "AHU": {
        "ec": ["AHU"],
        "et": [None, "Supply Fan", "Return Fan", "Cooling Coil", "Heating Coil", "Outside Air Damper"],
        "svc": ["Air", "Supply Air", "Return Air", "Outside Air", "Mixed Air", "Exhaust Air"],
    },
    "Chiller": {"ec": ["Chiller"], "et": [None, "Compressor", "Heat Exchanger"], "svc": ["Chilled Water", "Condenser Water"]},
    "Boiler": {"ec": ["Boiler"], "et": [None, "Hot Water Boiler"], "svc": ["Hot Water", "Natural Gas", "Steam"]},
    "Loop": {
        "ec": ["Hot Water Loop", "Chilled Water Loop", "Pump"],
        "et": [None, "Hot Water Pump", "Chilled Water Pump"],
        "svc": ["Hot Water", "Chilled Water"],
    },
    "TerminalUnit": {"ec": ["VAV", "Fan Coil Unit"], "et": [None, "Reheat Valve"], "svc": ["Zone Air", "Supply Air", "Hot Water"]},
}

# Gap roles. Each option fixes one slot: ("svc", token), ("et", token) or ("mod", word).
H_MINOR = {
    "AHU": [("svc", "Building Air"), ("et", "Booster Fan"), ("mod", "Override")],
    "TerminalUnit": [("et", "Booster Fan"), ("mod", "Override")],
}
H_MINOR_DEFAULT = [("mod", "Override")]
B_MINOR = {
    "Chiller": [("svc", "Refrigerant"), ("et", "Cooling Tower")],
    "Loop": [("mod", "Primary"), ("mod", "Secondary")],
}
B_MINOR_DEFAULT = [("mod", "Primary")]
BOTH_MINOR = {"AHU": [("et", "Enthalpy Wheel")]}
BOTH_MINOR_DEFAULT = [("svc", "Glycol")]

# Exact counts for two Haystack-only modifier gaps, placed in AHU cells
# that are otherwise fully mapped in Brick: 9 points is significant in a
# 440-point set, 8 is not.
SIGNIFICANCE_PROBES = [("Limit", 9), ("Reset", 8)]

LABELS = ["M", "P", "D"]


def joint(h, b):
    """North-west corner split of two label marginals into 3x3 cells."""
    h, b = list(h), list(b)
    cells = {}
    i = j = 0
    while i < 3 and j < 3:
        n = min(h[i], b[j])
        if n:
            cells[(LABELS[i], LABELS[j])] = n
        h[i] -= n
        b[j] -= n
        if h[i] == 0:
            i += 1
        else:
            j += 1
    return cells


def load_alignment():
    table = {}
    for name in ("haystack.csv", "brick.csv"):
        with open(os.path.join(ALIGN, name), newline="") as f:
            rows = csv.DictReader(line for line in f if not line.startswith("#"))
            for r in rows:
                key = (r["token"].strip().lower(), r["facet"].strip(), r["ontology"].strip())
                table[key] = bool(r["target"].strip())
    return table


def words(name):
    out, cur = [], ""
    for k, c in enumerate(name):
        if not c.isalnum():
            if cur:
                out.append(cur)
            cur = ""
            continue
        if cur:
            p = cur[-1]
            nxt = name[k + 1] if k + 1 < len(name) else ""
            if (p.islower() and c.isupper()) or (p.isalpha() and c.isdigit()) or (p.isdigit() and c.isalpha()) \
                    or (p.isupper() and c.isupper() and nxt.islower()):
                out.append(cur)
                cur = ""
        cur += c
    if cur:
        out.append(cur)
    return out


def label(point, table, ont):
    def outcome(token, facet):
        if token is None:
            return "na"
        return "map" if table.get((token.lower(), facet, ont), False) else "gap"

    ec = outcome(point["equipment_class"], "equipmentClass")
    pc = outcome(point["point_class"], "pointClass")
    et = outcome(point["equipment_type"], "equipmentType")
    mct = outcome(point["mct"], "measurementControlType")
    svc = outcome(point["service"], "service")
    for w in dict.fromkeys(x.lower() for x in words(point["name"])):
        if table.get((w, "modifier", ont)) is False:
            mct = "gap"
    vec = [ec, pc, et, mct, svc]
    if "gap" not in vec:
        return "M"
    minor = [et, mct, svc].count("gap")
    if ec == "map" and pc == "map" and minor == 1:
        return "P"
    return "D"


def cell_plan(system, hl, bl, n, probes):
    """Fixed slots for each of the n points of one (haystack, brick) cell."""
    h_minor = H_MINOR.get(system, H_MINOR_DEFAULT)
    b_minor = B_MINOR.get(system, B_MINOR_DEFAULT)
    both = BOTH_MINOR.get(system, BOTH_MINOR_DEFAULT)
    plans = []
    for k in range(n):
        fixed = {}
        if (hl, bl) == ("M", "P"):
            fixed.update([b_minor[k % len(b_minor)]])
        elif (hl, bl) == ("M", "D"):
            fixed["pc"] = "Efficiency"
        elif (hl, bl) == ("P", "M"):
            if probes:
                fixed["mod"] = probes.pop()
            else:
                fixed.update([h_minor[k % len(h_minor)]])
        elif (hl, bl) == ("P", "P"):
            fixed.update([both[k % len(both)]])
        elif (hl, bl) == ("P", "D"):
            fixed.update([h_minor[k % len(h_minor)]])
            fixed["pc"] = "Efficiency"
        elif (hl, bl) == ("D", "M"):
            fixed["pc"] = "Position"
        elif (hl, bl) == ("D", "P"):
            fixed.update([b_minor[k % len(b_minor)]])
            fixed["pc"] = "Position"
        elif (hl, bl) == ("D", "D"):
            fixed["pc"] = "Vibration"
        plans.append(fixed)
    return plans


MCT_WORD = {"AI": "Sensor", "AO": "Cmd", "DI": "Status", "DO": "Cmd"}


def squash(token):
    return "".join(w.capitalize() if w.islower() else w for w in token.replace("/", " ").split())


def make_name(system, seq, p, mod):
    parts = [PREFIX[system], f"{seq:03d}"]
    if p["equipment_type"]:
        parts.append(squash(p["equipment_type"]))
    if p["service"]:
        parts.append(squash(p["service"]))
    parts.append(squash(p["point_class"]))
    if mod:
        parts.append(mod)
    parts.append(MCT_WORD[p["mct"]])
    return "".join(parts)


def generate():
    rng = random.Random(20200814)
    table = load_alignment()
    points = []
    for system, (size, h, b) in COUNTS.items():
        cells = joint(h, b)
        assert sum(cells.values()) == size, system
        probes = []
        if system == "AHU":
            for word, count in SIGNIFICANCE_PROBES:
                probes += [word] * count
        used = set()
        seq = 1
        free = FREE[system]
        for (hl, bl), n in sorted(cells.items()):
            for fixed in cell_plan(system, hl, bl, n, probes):
                ecs = free["ec"]
                ets = [fixed["et"]] if "et" in fixed else free["et"]
                svcs = [fixed["svc"]] if "svc" in fixed else free["svc"]
                pcs = [fixed["pc"]] if "pc" in fixed else MAPPED_PC
                combos = list(itertools.product(ecs, ets, pcs, MCTS, svcs))
                rng.shuffle(combos)
                choice = next((c for c in combos if (system,) + c not in used), None)
                if choice is None:
                    sys.exit(f"no free facet tuple for {system} {hl}{bl} {fixed}")
                used.add((system,) + choice)
                ec, et, pc, mct, svc = choice
                p = {"system": system, "equipment_class": ec, "equipment_type": et, "point_class": pc, "mct": mct, "service": svc}
                p["name"] = make_name(system, seq, p, fixed.get("mod"))
                seq += 1
                p["cell"] = (hl, bl)
                points.append(p)
    return points, table


def evidence_names(points):
    """Points that carry the words the key relationship config looks for."""
    extra = [
        {"system": "AHU", "equipment_class": "AHU", "equipment_type": None, "point_class": "Temperature", "mct": "AI",
         "service": "Air", "name": "AHU900RoomAirTempSensor"},
        {"system": "AHU", "equipment_class": "AHU", "equipment_type": None, "point_class": "Pressure", "mct": "AI",
         "service": "Air", "name": "AHU901FloorAirPressureSensor"},
    ]
    return extra


def rejects(points):
    """Points the representative selection must drop: a repeated facet tuple,
    a name whose words are all taken, and an excluded name."""
    first = next(p for p in points if p["system"] == "AHU")
    dup = dict(first, name="AHU990DuplicateOfFirst")
    used = {(p["equipment_class"], p["equipment_type"], p["point_class"], p["mct"], p["service"])
            for p in points if p["system"] == "AHU"}
    fresh = [c for c in itertools.product(FREE["AHU"]["ec"], FREE["AHU"]["et"], MAPPED_PC, MCTS, FREE["AHU"]["svc"])
             if c not in used]
    ec, et, pc, mct, svc = fresh[0]
    nouniq = {"system": "AHU", "equipment_class": ec, "equipment_type": et, "point_class": pc, "mct": mct,
              "service": svc, "name": "AHUSupplyAirTemperatureSensor"}
    ec, et, pc, mct, svc = fresh[1]
    excluded = {"system": "AHU", "equipment_class": ec, "equipment_type": et, "point_class": pc, "mct": mct,
                "service": svc, "name": "AHU995LegacyGraphicTag"}
    return [dup, nouniq, excluded], ["AHU995LegacyGraphicTag"]


def main():
    points, table = generate()
    # Two AHU points replace ordinary Maps/Maps points so that the words the
    # key relationship evidence needs appear without changing any count.
    extra = evidence_names(points)
    for e in extra:
        victim = next(i for i, p in enumerate(points) if p["system"] == "AHU" and p["cell"] == ("M", "M")
                      and p["point_class"] not in ("Temperature", "Pressure") and "Room" not in p["name"])
        e["cell"] = ("M", "M")
        taken = {(p["system"], p["equipment_class"], p["equipment_type"], p["point_class"], p["mct"], p["service"])
                 for j, p in enumerate(points) if j != victim}
        key = (e["system"], e["equipment_class"], e["equipment_type"], e["point_class"], e["mct"], e["service"])
        assert key not in taken, f"evidence point tuple already used: {key}"
        points[victim] = e

    for p in points:
        for ont, idx in (("haystack", 0), ("brick", 1)):
            got = label(p, table, ont)
            if got != p["cell"][idx]:
                sys.exit(f"{p['name']}: {ont} label {got}, planned {p['cell'][idx]}")

    # per-system recount from the independent classifier
    for system, (size, h, b) in COUNTS.items():
        mine = [p for p in points if p["system"] == system]
        assert len(mine) == size
        for ont, want in (("haystack", h), ("brick", b)):
            got = tuple(sum(1 for p in mine if label(p, table, ont) == l) for l in LABELS)
            assert got == tuple(want), (system, ont, got, want)

    present = {p["equipment_class"] for p in points} | {p["equipment_type"] for p in points}
    for needed in ("AHU", "Supply Fan", "VAV", "Chilled Water Loop", "Hot Water Loop", "Chiller", "Compressor", "Boiler",
                   "Hot Water Pump"):
        assert needed in present, f"association endpoint {needed} missing"
    bad, excl = rejects(points)
    os.makedirs(OUT, exist_ok=True)
    rows = sorted(points + bad, key=lambda p: p["name"])
    with open(os.path.join(OUT, "dataset.csv"), "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["name", "system", "equipment_class", "equipment_type", "point_class", "mct", "service"])
        for p in rows:
            w.writerow([p["name"], p["system"], p["equipment_class"], p["equipment_type"] or "", p["point_class"], p["mct"],
                        p["service"] or ""])
    with open(os.path.join(OUT, "exclusions.txt"), "w") as f:
        f.write("# point names left out of the representative set\n")
        f.write("\n".join(excl) + "\n")
    with open(os.path.join(OUT, "associations.csv"), "w", newline="") as f:
        f.write("parent,child\n")
        f.write("AHU,Supply Fan\nAHU,VAV\nChilled Water Loop,AHU\nHot Water Loop,VAV\n")
        f.write("Chilled Water Loop,Chiller\nChiller,Compressor\nHot Water Loop,Boiler\nHot Water Loop,Hot Water Pump\n")
    print(f"wrote {len(rows)} points ({len(points)} representative) to {OUT}")


if __name__ == "__main__":
    main()
