#!/usr/bin/env python3
"""
Geometric confidence estimation: inverse-distance weighted class votes.

For query i with neighbors j, raw weights are 1 / (d_j + epsilon),
normalized to sum 1; vote_c is the weight mass on class c. The predicted
label is the argmax with ties resolved to class 0.
"""

from dataclasses import dataclass

import numpy as np
import pandas as pd

from manifold_rectify.utils.data import DataError, Dataset
from manifold_rectify.utils.geometry import NeighborSet

DEFAULT_EPSILON = 1e-8


@dataclass(eq=False)
class ConfidenceTable:
    row_ids: np.ndarray
    vote_0: np.ndarray
    vote_1: np.ndarray
    predicted: np.ndarray
    self_conf: np.ndarray
    maj_conf: np.ndarray

    def __len__(self) -> int:
        return int(self.row_ids.shape[0])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'row_id': self.row_ids,
            'vote_0': self.vote_0,
            'vote_1': self.vote_1,
            'predicted': self.predicted,
            'self_conf': self.self_conf,
            'maj_conf': self.maj_conf,
        })

    def to_csv(self, path: str) -> str:
        self.to_frame().to_csv(path, index=False, lineterminator='\n')
        return path


def inverse_distance_weights(distances: np.ndarray, epsilon: float = DEFAULT_EPSILON) -> np.ndarray:
    """Row-normalized 1 / (d + epsilon) weights."""
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    raw = 1.0 / (np.asarray(distances, dtype=np.float64) + epsilon)
    return raw / raw.sum(axis=1, keepdims=True)


def _check_neighbors(neighbors: NeighborSet, n_reference: int) -> None:
    if neighbors.indices.size and (neighbors.indices.min() < 0 or neighbors.indices.max() >= n_reference):
        raise DataError(
            f"neighbor index out of range [0, {n_reference}); NeighborSet does not belong to this dataset"
        )


def votes_from_weights(weights: np.ndarray, neighbor_labels: np.ndarray):
    """(vote_0, vote_1) from per-neighbor weights and labels."""
    vote_1 = np.sum(weights * (neighbor_labels == 1), axis=1)
    vote_0 = np.sum(weights * (neighbor_labels == 0), axis=1)
    return vote_0, vote_1


def _table(data: Dataset, weights: np.ndarray, neighbors: NeighborSet) -> ConfidenceTable:
    vote_0, vote_1 = votes_from_weights(weights, data.labels[neighbors.indices])
    predicted = (vote_1 > vote_0).astype(np.int64)
    self_conf = np.where(data.labels == 0, vote_0, vote_1)
    return ConfidenceTable(
        row_ids=data.row_ids.copy(),
        vote_0=vote_0,
        vote_1=vote_1,
        predicted=predicted,
        self_conf=self_conf,
        maj_conf=vote_0.copy(),
    )


def estimate(data: Dataset, neighbors: NeighborSet, epsilon: float = DEFAULT_EPSILON) -> ConfidenceTable:
    """
    Inverse-distance weighted confidence table.

    Args:
        data: Dataset the neighbors were built from (self excluded)
        neighbors: Output of ``knn_all(data, ...)``
        epsilon: Inverse-distance stabilizer

    Raises:
        DataError: If the NeighborSet does not match the dataset
    """
    if len(neighbors) != data.n_samples:
        raise DataError(f"NeighborSet has {len(neighbors)} rows, dataset has {data.n_samples}")
    _check_neighbors(neighbors, data.n_samples)
    return _table(data, inverse_distance_weights(neighbors.distances, epsilon), neighbors)


def uniform_estimate(data: Dataset, neighbors: NeighborSet) -> ConfidenceTable:
    """Box-kernel confidence table: every neighbor weighs 1/k."""
    if len(neighbors) != data.n_samples:
        raise DataError(f"NeighborSet has {len(neighbors)} rows, dataset has {data.n_samples}")
    _check_neighbors(neighbors, data.n_samples)
    weights = np.full(neighbors.indices.shape, 1.0 / neighbors.k)
    return _table(data, weights, neighbors)


def effective_neighbors(weights: np.ndarray) -> np.ndarray:
    """k_eff = 1 / sum(w^2) per row."""
    weights = np.atleast_2d(weights)
    return 1.0 / np.sum(weights * weights, axis=1)
