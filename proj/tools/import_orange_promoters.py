#!/usr/bin/env python3
"""Convert Orange's promoters.tab (one column per base) to the line format
`<+|->,<name>,<57 bases>` read by mofn.

Orange 2.7.8 (PyPI sdist, Orange/datasets/promoters.tab) ships the UCI
promoter gene sequences without example names; names are synthesized as
ex001..ex106 in file order.

    python3 tools/import_orange_promoters.py promoters.tab > data/promoters.data
"""
import sys


def main(path):
    with open(path) as f:
        rows = [line.rstrip("\n").split("\t") for line in f]
    body = [r for r in rows[3:] if len(r) >= 58]
    for n, r in enumerate(body, start=1):
        label = {"pp": "+", "mm": "-"}[r[57].strip()]
        seq = "".join(c.strip() for c in r[:57])
        assert len(seq) == 57 and set(seq) <= set("acgt"), n
        print(f"{label},ex{n:03d},\t\t{seq}")


if __name__ == "__main__":
    main(sys.argv[1])
