"""K-nearest-neighbour classification over a pluggable distance metric.

The classical stage: build the distance table from a test point to every
training point, keep the K nearest (ties resolved by lower training index),
and vote by class membership fraction. Vote ties go to the class whose
nearest member is closest, then to the earlier class in the declared class
order, so results are fully deterministic.

Training data is carried as a feature matrix plus an aligned label sequence;
the metric is any callable (vector, vector) -> float.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

Metric = Callable[[np.ndarray, np.ndarray], float]


@dataclass(frozen=True)
class Prediction:
    predicted_label: str
    neighbor_indices: tuple[int, ...]
    class_weights: dict[str, float]


@dataclass(frozen=True)
class EvaluationReport:
    accuracy: float
    confusion: np.ndarray  # rows true class, cols predicted, in class_set order
    predictions: tuple[Prediction, ...]


def distance_table(
    train_features: np.ndarray, test_point: np.ndarray, metric: Metric
) -> np.ndarray:
    """Distance from the test point to every training row, index-aligned."""
    train_features = np.asarray(train_features)
    if train_features.ndim != 2 or train_features.shape[0] < 1:
        raise ValueError("training set must be a non-empty feature matrix")
    test_point = np.asarray(test_point)
    return np.array([metric(row, test_point) for row in train_features], dtype=np.float64)


def k_nearest(distances: np.ndarray, k: int) -> np.ndarray:
    """Indices of the K smallest distances; ties break towards lower index."""
    distances = np.asarray(distances)
    if not 1 <= k <= distances.shape[0]:
        raise ValueError(f"k must lie in [1, {distances.shape[0]}], got {k}")
    return np.argsort(distances, kind="stable")[:k]


def majority_vote(
    neighbor_indices: np.ndarray,
    distances: np.ndarray,
    labels: Sequence[str],
    class_set: Sequence[str],
) -> Prediction:
    """Vote by membership fraction among the K neighbours.

    Each class receives weight (members among neighbours) / K. A tie on
    weight is broken by the smallest member distance, then by class order.
    """
    neighbor_indices = np.asarray(neighbor_indices)
    if neighbor_indices.shape[0] < 1:
        raise ValueError("neighbour set must be non-empty")
    k = neighbor_indices.shape[0]
    weights = {c: 0.0 for c in class_set}
    nearest_member = {c: np.inf for c in class_set}
    for idx in neighbor_indices:
        label = labels[idx]
        weights[label] += 1.0 / k
        nearest_member[label] = min(nearest_member[label], distances[idx])
    best = max(
        range(len(class_set)),
        key=lambda j: (weights[class_set[j]], -nearest_member[class_set[j]], -j),
    )
    return Prediction(
        predicted_label=class_set[best],
        neighbor_indices=tuple(int(i) for i in neighbor_indices),
        class_weights=weights,
    )


def classify(
    train_features: np.ndarray,
    train_labels: Sequence[str],
    test_point: np.ndarray,
    k: int,
    metric: Metric,
    class_set: Sequence[str],
) -> Prediction:
    distances = distance_table(train_features, test_point, metric)
    neighbors = k_nearest(distances, k)
    return majority_vote(neighbors, distances, train_labels, class_set)


def evaluate(
    train_features: np.ndarray,
    train_labels: Sequence[str],
    test_features: np.ndarray,
    test_labels: Sequence[str],
    k: int,
    metric: Metric,
    class_set: Sequence[str],
) -> EvaluationReport:
    """Classify every test point; report accuracy and the confusion matrix."""
    test_features = np.asarray(test_features)
    if test_features.ndim != 2 or test_features.shape[0] < 1:
        raise ValueError("test set must be a non-empty feature matrix")
    class_index = {c: j for j, c in enumerate(class_set)}
    confusion = np.zeros((len(class_set), len(class_set)), dtype=np.int64)
    predictions = []
    correct = 0
    for row, true_label in zip(test_features, test_labels):
        pred = classify(train_features, train_labels, row, k, metric, class_set)
        predictions.append(pred)
        confusion[class_index[true_label], class_index[pred.predicted_label]] += 1
        if pred.predicted_label == true_label:
            correct += 1
    return EvaluationReport(
        accuracy=correct / test_features.shape[0],
        confusion=confusion,
        predictions=tuple(predictions),
    )
