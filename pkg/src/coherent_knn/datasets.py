"""Dataset loading, synthetic generation, and seeded train/test splitting.

CSV benchmarks live under a data/ directory (override with the
COHERENT_KNN_DATA_DIR environment variable). Labels are kept as strings; the
class set preserves first-appearance order. Four synthetic binary families
(half_moons, blobs, concentric_circles, spirals) generate exactly balanced
two-feature datasets from parametric curves plus per-coordinate Gaussian
noise.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np


class DataError(Exception):
    """A dataset could not be read or fails its structural invariants."""


SYNTHETIC_FAMILIES = ("half_moons", "blobs", "concentric_circles", "spirals")

# Geometry defaults per family; sigma entries are the default noise level.
_FAMILY_DEFAULTS = {
    "half_moons": {"radius": 1.0, "offset": 0.5, "sigma": 0.1},
    "blobs": {"centers": ((-1.0, -1.0), (1.0, 1.0)), "sigma": 0.45},
    "concentric_circles": {"radii": (1.0, 0.5), "sigma": 0.08},
    "spirals": {"r0": 0.1, "pitch": 0.35, "turns": 1.75, "sigma": 0.05},
}


@dataclass(frozen=True)
class LabeledDataset:
    """Feature matrix with aligned labels and an ordered class set."""

    name: str
    features: np.ndarray
    labels: tuple[str, ...]
    class_set: tuple[str, ...]
    feature_names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        features = np.asarray(self.features, dtype=np.float64)
        if features.ndim != 2:
            raise DataError("features must be a 2-D matrix")
        if features.shape[0] < 2:
            raise DataError(f"need at least 2 rows, got {features.shape[0]}")
        if not np.all(np.isfinite(features)):
            raise DataError("features contain missing or non-finite values")
        if len(self.labels) != features.shape[0]:
            raise DataError("labels must align with feature rows")
        unknown = set(self.labels) - set(self.class_set)
        if unknown:
            raise DataError(f"labels outside the declared class set: {sorted(unknown)}")
        names = self.feature_names or tuple(
            f"feature_{j}" for j in range(features.shape[1])
        )
        if len(names) != features.shape[1]:
            raise DataError("feature names must align with columns")
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", tuple(str(l) for l in self.labels))
        object.__setattr__(self, "feature_names", names)

    @property
    def size(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]


@dataclass(frozen=True)
class SplitSpec:
    """Train fraction, split seed, and stratification switch."""

    train_fraction: float = 0.7
    seed: int = 0
    stratified: bool = True

    def __post_init__(self) -> None:
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(
                f"train fraction must lie in (0, 1), got {self.train_fraction}"
            )


def _class_order(labels) -> tuple[str, ...]:
    seen = []
    for label in labels:
        if label not in seen:
            seen.append(label)
    return tuple(seen)


def load_csv(
    path: str | Path,
    label_column: str | int,
    delimiter: str = ",",
    header: bool = True,
    name: str | None = None,
) -> LabeledDataset:
    """Read a labeled dataset from CSV.

    The label column is chosen by header name or by (possibly negative)
    index; every other column must parse as a float. Malformed rows are
    reported with their line number.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"dataset file not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        rows = [(lineno, row) for lineno, row in enumerate(reader, start=1) if row]
    if not rows:
        raise DataError(f"{path}: file is empty")

    column_names: list[str] | None = None
    if header:
        column_names = [c.strip() for c in rows[0][1]]
        rows = rows[1:]
    if not rows:
        raise DataError(f"{path}: no data rows")

    width = len(rows[0][1])
    if isinstance(label_column, str):
        if column_names is None:
            raise DataError("label column by name requires a header row")
        try:
            label_idx = column_names.index(label_column)
        except ValueError:
            raise DataError(
                f"{path}: unknown label column {label_column!r}; "
                f"columns are {column_names}"
            ) from None
    else:
        label_idx = label_column if label_column >= 0 else width + label_column
        if not 0 <= label_idx < width:
            raise DataError(f"{path}: label column index {label_column} out of range")

    features, labels = [], []
    for lineno, row in rows:
        if len(row) != width:
            raise DataError(
                f"{path}:{lineno}: expected {width} fields, got {len(row)}"
            )
        labels.append(row[label_idx].strip())
        try:
            features.append(
                [float(v) for j, v in enumerate(row) if j != label_idx]
            )
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: non-numeric feature value ({exc})") from None

    feature_names: tuple[str, ...] = ()
    if column_names is not None:
        feature_names = tuple(
            c for j, c in enumerate(column_names) if j != label_idx
        )
    return LabeledDataset(
        name=name or path.stem,
        features=np.array(features, dtype=np.float64),
        labels=tuple(labels),
        class_set=_class_order(labels),
        feature_names=feature_names,
    )


def write_csv(ds: LabeledDataset, path: str | Path, label_column: str = "label") -> None:
    """Write a dataset as CSV with a header row; floats keep full precision."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(ds.feature_names) + [label_column])
        for row, label in zip(ds.features, ds.labels):
            writer.writerow([repr(float(v)) for v in row] + [label])


def select_features(ds: LabeledDataset, indices) -> LabeledDataset:
    """Project the dataset onto the given feature columns, labels unchanged."""
    indices = list(indices)
    if not indices:
        raise DataError("feature selection needs at least one column")
    if len(set(indices)) != len(indices):
        raise DataError(f"duplicate feature indices: {indices}")
    for idx in indices:
        if not 0 <= idx < ds.n_features:
            raise DataError(f"feature index {idx} out of range for {ds.n_features} columns")
    return replace(
        ds,
        features=ds.features[:, indices],
        feature_names=tuple(ds.feature_names[i] for i in indices),
    )


def generate_synthetic(
    family: str,
    count: int = 200,
    noise_sigma: float | None = None,
    seed: int = 0,
) -> LabeledDataset:
    """Generate a balanced two-feature binary dataset from a parametric family.

    half_moons: two interleaved semicircle arcs; blobs: two isotropic
    Gaussian clusters; concentric_circles: two radii sampled uniformly in
    angle; spirals: two arithmetic-spiral arms half a turn apart. Gaussian
    noise of std `noise_sigma` (per-family default when None) is added to
    each coordinate. Labels are "0" and "1", exactly count/2 each.
    """
    if family not in SYNTHETIC_FAMILIES:
        raise DataError(
            f"unknown synthetic family {family!r}; choose from {SYNTHETIC_FAMILIES}"
        )
    if count < 2 or count % 2 != 0:
        raise DataError(f"count must be even and >= 2 for balanced classes, got {count}")
    params = _FAMILY_DEFAULTS[family]
    sigma = params["sigma"] if noise_sigma is None else float(noise_sigma)
    if sigma < 0:
        raise DataError(f"noise sigma must be non-negative, got {sigma}")

    rng = np.random.default_rng(seed)
    half = count // 2

    if family == "half_moons":
        r = params["radius"]
        t0 = rng.uniform(0.0, math.pi, half)
        t1 = rng.uniform(0.0, math.pi, half)
        x0 = np.column_stack([r * np.cos(t0), r * np.sin(t0)])
        x1 = np.column_stack([r - r * np.cos(t1), params["offset"] - r * np.sin(t1)])
    elif family == "blobs":
        c0, c1 = params["centers"]
        x0 = np.tile(c0, (half, 1)).astype(np.float64)
        x1 = np.tile(c1, (half, 1)).astype(np.float64)
    elif family == "concentric_circles":
        r_out, r_in = params["radii"]
        t0 = rng.uniform(0.0, 2.0 * math.pi, half)
        t1 = rng.uniform(0.0, 2.0 * math.pi, half)
        x0 = np.column_stack([r_out * np.cos(t0), r_out * np.sin(t0)])
        x1 = np.column_stack([r_in * np.cos(t1), r_in * np.sin(t1)])
    else:  # spirals
        t_max = 2.0 * math.pi * params["turns"]
        t0 = rng.uniform(0.0, t_max, half)
        t1 = rng.uniform(0.0, t_max, half)
        r0 = params["r0"] + params["pitch"] * t0
        r1 = params["r0"] + params["pitch"] * t1
        x0 = np.column_stack([r0 * np.cos(t0), r0 * np.sin(t0)])
        x1 = np.column_stack([r1 * np.cos(t1 + math.pi), r1 * np.sin(t1 + math.pi)])

    features = np.vstack([x0, x1])
    if sigma > 0:
        features = features + rng.normal(0.0, sigma, features.shape)
    labels = ("0",) * half + ("1",) * half
    return LabeledDataset(
        name=family,
        features=features,
        labels=labels,
        class_set=("0", "1"),
        feature_names=("feature_1", "feature_2"),
    )


def _stratified_counts(
    class_counts: list[int], train_total: int, total: int
) -> list[int]:
    # Largest-remainder apportionment: per-class counts stay within one
    # point of the exact proportional share while summing to train_total.
    exact = [train_total * c / total for c in class_counts]
    counts = [int(math.floor(e)) for e in exact]
    remainders = sorted(
        range(len(exact)), key=lambda j: (exact[j] - counts[j], -j), reverse=True
    )
    shortfall = train_total - sum(counts)
    for j in remainders[:shortfall]:
        counts[j] += 1
    return counts


def split(ds: LabeledDataset, spec: SplitSpec) -> tuple[LabeledDataset, LabeledDataset]:
    """Disjoint, exhaustive train/test split; stratified keeps class ratios.

    The train side receives round(train_fraction * M) rows; both sides must
    be non-empty.
    """
    train_total = round(spec.train_fraction * ds.size)
    if train_total < 1 or train_total >= ds.size:
        raise DataError(
            f"train fraction {spec.train_fraction} leaves an empty side for {ds.size} rows"
        )
    rng = np.random.default_rng(spec.seed)
    if spec.stratified:
        train_idx: list[int] = []
        members = {c: [i for i, l in enumerate(ds.labels) if l == c] for c in ds.class_set}
        per_class = _stratified_counts(
            [len(members[c]) for c in ds.class_set], train_total, ds.size
        )
        for c, n_train in zip(ds.class_set, per_class):
            picked = rng.permutation(len(members[c]))[:n_train]
            train_idx.extend(members[c][i] for i in picked)
        train_mask = np.zeros(ds.size, dtype=bool)
        train_mask[train_idx] = True
    else:
        order = rng.permutation(ds.size)
        train_mask = np.zeros(ds.size, dtype=bool)
        train_mask[order[:train_total]] = True

    def take(mask: np.ndarray, suffix: str) -> LabeledDataset:
        idx = np.flatnonzero(mask)
        return replace(
            ds,
            name=f"{ds.name}[{suffix}]",
            features=ds.features[idx],
            labels=tuple(ds.labels[i] for i in idx),
        )

    return take(train_mask, "train"), take(~train_mask, "test")


def default_data_dir() -> Path:
    """Dataset directory: COHERENT_KNN_DATA_DIR if set, else ./data."""
    override = os.environ.get("COHERENT_KNN_DATA_DIR")
    if override:
        return Path(override)
    return Path("data")


# Named benchmark files and the label column each one carries.
BENCHMARK_LABEL_COLUMNS = {
    "iris": "species",
    "wine": "class",
    "sonar": "label",
}


def load_named(name: str, data_dir: str | Path | None = None) -> LabeledDataset:
    """Load a named benchmark CSV (iris, wine, sonar) from the data directory."""
    if name not in BENCHMARK_LABEL_COLUMNS:
        raise DataError(
            f"unknown dataset {name!r}; known names: {sorted(BENCHMARK_LABEL_COLUMNS)}"
        )
    directory = Path(data_dir) if data_dir is not None else default_data_dir()
    return load_csv(
        directory / f"{name}.csv",
        label_column=BENCHMARK_LABEL_COLUMNS[name],
        name=name,
    )
