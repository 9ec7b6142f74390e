#!/usr/bin/env python3
"""Regenerate the golden files in golden/.

Every number here comes from the literal closed-form table entries, written
out independently of the package so the goldens stay an external oracle:

    op2  point       cot(r) x8,   2 cot(2r) x7
    op2  line       -tan(r) x8,   2 cot(2r) x7
    op2  hp2         cot(r) x4,  -tan(r) x4,  2 cot(2r) x3, -2 tan(2r) x4
    oh2  point      coth(r) x8,  2 coth(2r) x7
    oh2  line       tanh(r) x8,  2 coth(2r) x7
    oh2  hp2        coth(r) x4,  tanh(r) x4,  2 coth(2r) x3,  2 tanh(2r) x4
    oh2  horosphere       1 x8,          2 x7

Run from the repository root:  python3 scripts/generate_goldens.py
"""

import json
import math
import pathlib

GOLDEN_DIR = pathlib.Path(__file__).resolve().parent.parent / "golden"

RADII = {
    "pi12": math.pi / 12,
    "pi8": math.pi / 8,
    "pi6": math.pi / 6,
}


def cot(x):
    return math.cos(x) / math.sin(x)


def coth(x):
    return math.cosh(x) / math.sinh(x)


def column(ambient, core, r):
    if ambient == "op2":
        if core == "point":
            return [(cot(r), 8), (2 * cot(2 * r), 7)]
        if core == "line":
            return [(-math.tan(r), 8), (2 * cot(2 * r), 7)]
        if core == "hp2":
            return [
                (cot(r), 4),
                (-math.tan(r), 4),
                (2 * cot(2 * r), 3),
                (-2 * math.tan(2 * r), 4),
            ]
    if ambient == "oh2":
        if core == "point":
            return [(coth(r), 8), (2 * coth(2 * r), 7)]
        if core == "line":
            return [(math.tanh(r), 8), (2 * coth(2 * r), 7)]
        if core == "hp2":
            return [
                (coth(r), 4),
                (math.tanh(r), 4),
                (2 * coth(2 * r), 3),
                (2 * math.tanh(2 * r), 4),
            ]
        if core == "horosphere":
            return [(1.0, 8), (2.0, 7)]
    raise ValueError((ambient, core))


def octonion_products():
    """All 64 basis products from the seven index triples."""
    triples = [(i, i % 7 + 1, (i + 2) % 7 + 1) for i in range(1, 8)]
    table = {}
    for i in range(8):
        table[(0, i)] = (1, i)
        table[(i, 0)] = (1, i)
    for i in range(1, 8):
        table[(i, i)] = (-1, 0)
    for a, b, c in triples:
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            table[(x, y)] = (1, z)
            table[(y, x)] = (-1, z)
    return [
        {"i": i, "j": j, "sign": table[(i, j)][0], "k": table[(i, j)][1]}
        for i in range(8)
        for j in range(8)
    ]


def main():
    GOLDEN_DIR.mkdir(exist_ok=True)
    written = []
    for ambient in ("op2", "oh2"):
        for core in ("point", "line", "hp2"):
            for tag, r in RADII.items():
                rows = [
                    {"value": v, "multiplicity": m} for v, m in column(ambient, core, r)
                ]
                doc = {"ambient": ambient, "core": core, "radius": r, "rows": rows}
                path = GOLDEN_DIR / f"tube_{ambient}_{core}_{tag}.json"
                path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
                written.append(path.name)
    rows = [{"value": v, "multiplicity": m} for v, m in column("oh2", "horosphere", None)]
    doc = {"ambient": "oh2", "core": "horosphere", "radius": None, "rows": rows}
    path = GOLDEN_DIR / "tube_oh2_horosphere.json"
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    written.append(path.name)

    path = GOLDEN_DIR / "octonion_table.json"
    path.write_text(
        json.dumps({"dimension": 8, "products": octonion_products()}, indent=2,
                   sort_keys=True) + "\n"
    )
    written.append(path.name)
    print(f"wrote {len(written)} golden files to {GOLDEN_DIR}")


if __name__ == "__main__":
    main()
