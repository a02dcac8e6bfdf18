#!/usr/bin/env python3
"""
Distance metrics, adaptive metric selection, and exact brute-force
k-nearest-neighbor search with self-exclusion.

All distances are float64. Neighbor lists are ordered by distance with
ties broken by ascending reference index, so results never depend on
chunking or evaluation order.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from manifold_rectify.utils.data import DataError, Dataset

DEFAULT_METRIC_THRESHOLD = 100

# query rows per distance block; bounds memory at roughly CHUNK * N * d floats
_CHUNK_ELEMENTS = 4_000_000


class Metric(str, Enum):
    EUCLIDEAN = "euclidean"
    COSINE = "cosine"
    AUTO = "auto"

    @classmethod
    def parse(cls, value) -> 'Metric':
        if isinstance(value, Metric):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown metric {value!r}; expected one of auto, euclidean, cosine")


@dataclass(eq=False)
class NeighborSet:
    """Per query row: k reference indices ascending by distance, and the distances."""
    indices: np.ndarray
    distances: np.ndarray

    @property
    def k(self) -> int:
        return int(self.indices.shape[1])

    def __len__(self) -> int:
        return int(self.indices.shape[0])


def select_metric(metric: Metric, d: int, threshold: int = DEFAULT_METRIC_THRESHOLD) -> Metric:
    """
    Resolve ``Auto`` by feature dimension: Euclidean iff d <= threshold.

    Explicit metrics pass through unchanged.
    """
    metric = Metric.parse(metric)
    if d < 1:
        raise ValueError(f"feature dimension must be >= 1, got {d}")
    if metric is not Metric.AUTO:
        return metric
    return Metric.EUCLIDEAN if d <= threshold else Metric.COSINE


def _cosine_similarity(dots: np.ndarray, norms_a: np.ndarray, norms_b: np.ndarray) -> np.ndarray:
    denom = norms_a[:, None] * norms_b[None, :]
    with np.errstate(divide='ignore', invalid='ignore'):
        similarity = np.where(denom > 0, dots / np.where(denom > 0, denom, 1.0), 0.0)
    return np.clip(similarity, -1.0, 1.0)


def pairwise_distances(a: np.ndarray, b: np.ndarray, metric: Metric) -> np.ndarray:
    """
    Distance matrix between rows of ``a`` and rows of ``b``.

    Euclidean is computed from explicit differences (no norm expansion) so
    values match ``distance`` bit for bit. Cosine is 1 - cos, with a zero
    vector treated as similarity 0.
    """
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    b = np.atleast_2d(np.asarray(b, dtype=np.float64))
    if a.shape[1] != b.shape[1]:
        raise DataError(f"dimension mismatch: {a.shape[1]} vs {b.shape[1]}")
    metric = Metric.parse(metric)
    if metric is Metric.AUTO:
        raise ValueError("metric must be resolved with select_metric before computing distances")

    if metric is Metric.EUCLIDEAN:
        diff = a[:, None, :] - b[None, :, :]
        return np.sqrt(np.einsum('ijk,ijk->ij', diff, diff))

    dots = np.einsum('ik,jk->ij', a, b)
    norms_a = np.sqrt(np.einsum('ik,ik->i', a, a))
    norms_b = np.sqrt(np.einsum('ik,ik->i', b, b))
    return np.clip(1.0 - _cosine_similarity(dots, norms_a, norms_b), 0.0, 2.0)


def distance(a, b, metric: Metric) -> float:
    """
    Distance between two vectors under a resolved metric.

    Examples:
        distance((0, 0), (3, 4), Metric.EUCLIDEAN)  # 5.0
        distance((1, 0), (-1, 0), Metric.COSINE)    # 2.0
    """
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise DataError(f"dimension mismatch: {a.size} vs {b.size}")
    return float(pairwise_distances(a[None, :], b[None, :], metric)[0, 0])


def knn_query(
    queries: np.ndarray,
    reference: np.ndarray,
    k: int,
    metric: Metric,
    exclude: Optional[np.ndarray] = None,
) -> NeighborSet:
    """
    Exact k nearest reference rows for each query row.

    Args:
        queries: (Q, d) query matrix
        reference: (N, d) reference matrix
        k: Neighbors per query
        metric: Resolved metric
        exclude: Optional (Q,) reference index to drop per query (-1 = none)

    Returns:
        NeighborSet with (Q, k) indices into ``reference``
    """
    queries = np.atleast_2d(np.asarray(queries, dtype=np.float64))
    reference = np.atleast_2d(np.asarray(reference, dtype=np.float64))
    n_ref = reference.shape[0]
    available = n_ref - (1 if exclude is not None else 0)
    if k < 1:
        raise DataError(f"k must be at least 1, got {k}")
    if available < k:
        raise DataError(f"need at least {k + (1 if exclude is not None else 0)} reference rows for k={k}, got {n_ref}")

    n_queries = queries.shape[0]
    indices = np.empty((n_queries, k), dtype=np.int64)
    distances = np.empty((n_queries, k), dtype=np.float64)
    chunk = max(1, _CHUNK_ELEMENTS // max(1, n_ref * reference.shape[1]))

    for start in range(0, n_queries, chunk):
        stop = min(start + chunk, n_queries)
        block = pairwise_distances(queries[start:stop], reference, metric)
        if exclude is not None:
            rows = np.arange(stop - start)
            drop = np.asarray(exclude[start:stop], dtype=np.int64)
            valid = drop >= 0
            block[rows[valid], drop[valid]] = np.inf
        # stable sort: equal distances keep ascending reference index
        order = np.argsort(block, axis=1, kind='stable')[:, :k]
        indices[start:stop] = order
        distances[start:stop] = np.take_along_axis(block, order, axis=1)

    return NeighborSet(indices=indices, distances=distances)


def knn_all(data: Dataset, k: int, metric: Metric, threshold: int = DEFAULT_METRIC_THRESHOLD) -> NeighborSet:
    """
    All-points kNN over a Dataset with the query row itself excluded.

    Raises:
        DataError: If N <= k
    """
    if data.n_samples <= k:
        raise DataError(f"need at least k+1 = {k + 1} rows for k={k}, got {data.n_samples}")
    resolved = select_metric(metric, data.n_features, threshold)
    return knn_query(data.features, data.features, k, resolved, exclude=np.arange(data.n_samples))


def relative_contrast(features: np.ndarray, metric: Metric, threshold: int = DEFAULT_METRIC_THRESHOLD) -> float:
    """
    (d_max - d_min) / d_min over all distinct pairs.

    Values near 0 indicate distance concentration. Returns inf when two
    rows coincide and nan with fewer than two rows.
    """
    features = np.atleast_2d(np.asarray(features, dtype=np.float64))
    if features.shape[0] < 2:
        return float('nan')
    resolved = select_metric(metric, features.shape[1], threshold)
    upper = np.triu_indices(features.shape[0], k=1)
    values = pairwise_distances(features, features, resolved)[upper]
    d_min, d_max = float(values.min()), float(values.max())
    if d_min == 0.0:
        return float('inf')
    return (d_max - d_min) / d_min
