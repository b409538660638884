#!/usr/bin/env python3
"""Write the Wisconsin diagnostic breast cancer data as a headed CSV.

Accepts either the UCI wdbc.data file (id, diagnosis, 30 features, no header)
or scikit-learn's bundled breast_cancer.csv (count header, 30 features,
target with 0 = malignant). Output columns: id, diagnosis (M/B), then the 30
features named <characteristic>_<mean|se|worst>.
"""
import csv
import sys

CHARACTERISTICS = [
    "radius", "texture", "perimeter", "area", "smoothness", "compactness",
    "concavity", "concave_points", "symmetry", "fractal_dimension",
]
NAMES = [f"{c}_{kind}" for kind in ("mean", "se", "worst") for c in CHARACTERISTICS]


def read_rows(path):
    with open(path, newline="") as f:
        rows = [r for r in csv.reader(f) if r]
    if len(rows[0]) == 4 and rows[0][2:] == ["malignant", "benign"]:
        # scikit-learn layout: no ids, integer target.
        return [[str(i + 1), "M" if r[30].strip() == "0" else "B"] + r[:30]
                for i, r in enumerate(rows[1:])]
    return [[r[0], r[1]] + r[2:32] for r in rows]


def main():
    if len(sys.argv) != 3:
        sys.exit("usage: make_wdbc_csv.py <wdbc.data|breast_cancer.csv> <out.csv>")
    rows = read_rows(sys.argv[1])
    if len(rows) != 569 or any(len(r) != 32 for r in rows):
        sys.exit(f"expected 569 rows of 32 fields, got {len(rows)}")
    with open(sys.argv[2], "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["id", "diagnosis"] + NAMES)
        w.writerows(rows)


if __name__ == "__main__":
    main()
