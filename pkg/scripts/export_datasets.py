#!/usr/bin/env python3
"""Export the bundled benchmark CSVs under data/.

Iris and Wine are written from scikit-learn's packaged copies (no network
needed). The Sonar benchmark (208 rows x 60 features, labels R/M) is not
bundled with scikit-learn; obtain the standard "Connectionist Bench (Sonar,
Mines vs. Rocks)" CSV separately and save it as data/sonar.csv with a header
whose label column is named `label`.

Usage: python scripts/export_datasets.py [data_dir]
"""

import csv
import sys
from pathlib import Path

from sklearn.datasets import load_iris, load_wine

IRIS_COLUMNS = ["sepal_length", "sepal_width", "petal_length", "petal_width"]


def export_iris(out: Path) -> None:
    bunch = load_iris()
    with out.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(IRIS_COLUMNS + ["species"])
        for row, target in zip(bunch.data, bunch.target):
            writer.writerow([repr(float(v)) for v in row] + [bunch.target_names[target]])


def export_wine(out: Path) -> None:
    bunch = load_wine()
    names = [n.replace("/", "_") for n in bunch.feature_names]
    with out.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(names + ["class"])
        for row, target in zip(bunch.data, bunch.target):
            writer.writerow([repr(float(v)) for v in row] + [str(int(target))])


def main() -> int:
    data_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("data")
    data_dir.mkdir(parents=True, exist_ok=True)
    export_iris(data_dir / "iris.csv")
    export_wine(data_dir / "wine.csv")
    print(f"wrote {data_dir / 'iris.csv'} and {data_dir / 'wine.csv'}")
    if not (data_dir / "sonar.csv").is_file():
        print("note: data/sonar.csv not present; see the module docstring for how to add it")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
