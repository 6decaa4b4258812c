#!/usr/bin/env python3
"""Reproduce the benchmark accuracy tables over multiple split seeds.

Runs the full split -> min-max scale -> phase encode -> KNN pipeline with
the exact coherent distance on every available benchmark and synthetic
family, reporting per-dataset median/min/max accuracy and the resource
audit for the padded circuit sizes.

Usage: python scripts/run_benchmarks.py [--seeds 10] [--out results.json]
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from coherent_knn import datasets, knn, metric, resources
from coherent_knn.datasets import DataError

REPO_DATA = Path(__file__).resolve().parent.parent / "data"

BENCHMARKS = [
    ("iris", "iris", None, 3),
    ("iris (petal width, sepal length)", "iris", [3, 0], 3),
    ("iris (petal width, petal length)", "iris", [3, 2], 3),
    ("wine (first 10 features)", "wine", list(range(10)), 20),
    ("sonar", "sonar", None, 5),
    ("half_moons", None, None, 3),
    ("blobs", None, None, 3),
    ("concentric_circles", None, None, 3),
    ("spirals", None, None, 3),
]


def run_one(title: str, source: str | None, features, k: int, seeds: int) -> dict:
    accuracies = []
    n_features = None
    train_size = None
    for seed in range(seeds):
        if source is None:
            ds = datasets.generate_synthetic(title, count=200, seed=seed)
        else:
            ds = datasets.load_named(source, REPO_DATA)
            if features is not None:
                ds = datasets.select_features(ds, features)
        train, test = datasets.split(ds, datasets.SplitSpec(train_fraction=0.7, seed=seed))
        scaler = metric.fit_scaler(train.features)
        report = knn.evaluate(
            metric.phase_matrix(train.features, scaler),
            train.labels,
            metric.phase_matrix(test.features, scaler),
            test.labels,
            k,
            metric.cdm_exact,
            ds.class_set,
        )
        accuracies.append(report.accuracy)
        n_features, train_size = ds.n_features, train.size
    audit = resources.audit_resources(train_size, n_features)
    return {
        "dataset": title,
        "k": k,
        "seeds": seeds,
        "median_accuracy": float(np.median(accuracies)),
        "min_accuracy": float(min(accuracies)),
        "max_accuracy": float(max(accuracies)),
        "resource_audit": {
            "beam_splitters": audit.beam_splitters,
            "cross_kerr_gates": audit.cross_kerr_gates,
            "phase_shifters": audit.phase_shifters,
            "photons": audit.photons,
        },
    }


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=10, help="number of split seeds (default: 10)")
    ap.add_argument("--out", help="write the results as JSON to this path")
    args = ap.parse_args()

    results = []
    print(f"{'dataset':<34} {'K':>3} {'median':>7} {'min':>6} {'max':>6}")
    for title, source, features, k in BENCHMARKS:
        try:
            row = run_one(title, source, features, k, args.seeds)
        except DataError as exc:
            print(f"{title:<34} {k:>3}   skipped ({exc})")
            continue
        results.append(row)
        print(
            f"{title:<34} {k:>3} {row['median_accuracy']:>7.3f} "
            f"{row['min_accuracy']:>6.3f} {row['max_accuracy']:>6.3f}"
        )
    if args.out:
        Path(args.out).write_text(json.dumps(results, indent=2, sort_keys=True))
        print(f"\nwrote {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
