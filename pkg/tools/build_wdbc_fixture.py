"""Rebuild ``src/histoclass/data/wdbc.data`` from scikit-learn's bundled copy.

scikit-learn ships the 569 WDBC records without the original patient ids, so
records get synthetic ids ``900001..900569`` in source order. Feature values
are copied as text, untouched.
"""

import csv
from pathlib import Path

import sklearn.datasets

SRC = Path(sklearn.datasets.__file__).parent / "data" / "breast_cancer.csv"
DEST = Path(__file__).resolve().parents[1] / "src" / "histoclass" / "data" / "wdbc.data"


def main():
    with SRC.open(newline="") as fh:
        rows = list(csv.reader(fh))
    n_samples, n_features = int(rows[0][0]), int(rows[0][1])
    lines = []
    for i, row in enumerate(rows[1 : n_samples + 1]):
        values, target = row[:n_features], row[n_features]
        code = "M" if target == "0" else "B"
        lines.append(",".join([str(900001 + i), code, *values]))
    DEST.write_text("\n".join(lines) + "\n")
    print(f"wrote {len(lines)} records to {DEST}")


if __name__ == "__main__":
    main()
