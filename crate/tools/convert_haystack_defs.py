#!/usr/bin/env python3
"""Convert a Haystack def grid (Zinc) into one Trio file per library.

The def grid used here is the one shipped as a test fixture with the
`libhaystack` crate (Project Haystack defs, version 3.9.15). This script is
deliberately independent of the Rust parser: it carries its own Zinc row
reader and its own Trio writer, and it records def/lib counts that the Rust
test-suite compares against.

usage: convert_haystack_defs.py <defs.zinc> <out-dir> <oracle.json>
"""
import json
import os
import sys


class Reader:
    def __init__(self, text):
        self.s = text
        self.i = 0

    def peek(self):
        return self.s[self.i] if self.i < len(self.s) else ""

    def eat(self, ch):
        assert self.peek() == ch, (ch, self.s[self.i : self.i + 40])
        self.i += 1

    def ident(self, extra="_:-"):
        j = self.i
        while self.i < len(self.s) and (self.s[self.i].isalnum() or self.s[self.i] in extra):
            self.i += 1
        assert self.i > j, self.s[j : j + 40]
        return self.s[j : self.i]

    def value(self):
        c = self.peek()
        if c in ",]}\n" or c == "":
            return None
        if c == "^":
            self.i += 1
            return ("sym", self.ident())
        if c == '"':
            self.i += 1
            out = []
            while True:
                ch = self.s[self.i]
                self.i += 1
                if ch == '"':
                    break
                if ch == "\\":
                    e = self.s[self.i]
                    self.i += 1
                    if e == "u":
                        out.append(chr(int(self.s[self.i : self.i + 4], 16)))
                        self.i += 4
                    else:
                        out.append({"n": "\n", "t": "\t", '"': '"', "\\": "\\", "$": "$"}[e])
                else:
                    out.append(ch)
            return ("str", "".join(out))
        if c == "`":
            j = self.s.index("`", self.i + 1)
            v = self.s[self.i + 1 : j]
            self.i = j + 1
            return ("uri", v)
        if c == "[":
            self.i += 1
            items = []
            while self.peek() != "]":
                items.append(self.value())
                if self.peek() == ",":
                    self.i += 1
            self.eat("]")
            return ("list", items)
        if c == "{":
            self.i += 1
            pairs = []
            while self.peek() != "}":
                while self.peek() == " ":
                    self.i += 1
                name = self.ident("_")
                if self.peek() == ":":
                    self.i += 1
                    pairs.append((name, self.value()))
                else:
                    pairs.append((name, ("marker",)))
                while self.peek() and self.peek() in " ,":
                    self.i += 1
            self.eat("}")
            return ("dict", pairs)
        if c == "M" and self.s[self.i + 1 : self.i + 2] in (",", "\n", "]", "}", ""):
            self.i += 1
            return ("marker",)
        if c.isdigit() or c == "-":
            j = self.i
            while self.i < len(self.s) and self.s[self.i] not in ",]}\n":
                self.i += 1
            return ("num", self.s[j : self.i])
        raise ValueError("unexpected %r at %d" % (c, self.i))


def parse_grid(text):
    lines = text.split("\n")
    assert lines[0].startswith("ver:")
    cols = lines[1].split(",")
    rows = []
    for line in lines[2:]:
        if not line.strip():
            continue
        r = Reader(line)
        cells = []
        while True:
            cells.append(r.value())
            if r.peek() == ",":
                r.i += 1
                continue
            break
        assert r.i == len(line), line[r.i :]
        assert len(cells) == len(cols), (len(cells), len(cols), line[:60])
        rows.append([(c, v) for c, v in zip(cols, cells) if v is not None])
    return rows


def zinc(v):
    kind = v[0]
    if kind == "marker":
        return "M"
    if kind == "sym":
        return "^" + v[1]
    if kind == "str":
        s = v[1].replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t")
        return '"' + s + '"'
    if kind == "uri":
        return "`" + v[1] + "`"
    if kind == "num":
        return v[1]
    if kind == "list":
        return "[" + ", ".join(zinc(x) for x in v[1]) + "]"
    if kind == "dict":
        parts = []
        for name, val in v[1]:
            parts.append(name if val[0] == "marker" else name + ":" + zinc(val))
        return "{" + " ".join(parts) + "}"
    raise ValueError(kind)


def trio_record(pairs):
    out = []
    for name, v in pairs:
        if v[0] == "marker":
            out.append(name)
        elif v[0] == "str" and "\n" in v[1]:
            # multi-line strings use the indented block form
            out.append(name + ":")
            for line in v[1].split("\n"):
                out.append("  " + line)
        elif v[0] == "list" and any(x[0] == "dict" for x in v[1]):
            out.append(name + ": [")
            for x in v[1]:
                out.append("  " + zinc(x) + ",")
            out.append("  ]")
        else:
            out.append(name + ": " + zinc(v))
    return "\n".join(out) + "\n"


def main():
    src, out_dir, oracle_path = sys.argv[1:4]
    rows = parse_grid(open(src, encoding="utf-8").read())
    libs = {}
    for pairs in rows:
        d = dict(pairs)
        lib = d["lib"][1].split(":", 1)[1]
        libs.setdefault(lib, []).append(pairs)
    os.makedirs(out_dir, exist_ok=True)
    oracle = {"source": os.path.basename(src), "def_count": len(rows), "libs": {}, "samples": {}}
    for lib, recs in sorted(libs.items()):
        recs.sort(key=lambda p: p[0][1][1])
        with open(os.path.join(out_dir, lib + ".trio"), "w", encoding="utf-8", newline="\n") as f:
            f.write("// Project Haystack defs, lib %s (converted from a Zinc def grid)\n" % lib)
            for pairs in recs:
                f.write("---\n")
                f.write(trio_record(pairs))
            f.write("---\n")
        oracle["libs"][lib] = len(recs)
    # a few structural samples for cross-checking the Rust loader
    by_def = {dict(p)["def"][1]: dict(p) for p in rows}
    for sym in ["ahu", "equipRef", "equip", "temp", "heatExchanger", "children", "lib:phIoT"]:
        d = by_def.get(sym)
        if d is None:
            continue
        is_ = d.get("is")
        supers = [x[1] for x in is_[1]] if is_ else []
        kids = d.get("children")
        oracle["samples"][sym] = {
            "is": supers,
            "children": len(kids[1]) if kids else 0,
            "tags": len(d),
        }
    oracle["ref_defs"] = sorted(
        s for s, d in by_def.items() if d.get("is") and ("sym", "ref") in d["is"][1]
    )
    with open(oracle_path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(oracle, f, indent=2, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main()
