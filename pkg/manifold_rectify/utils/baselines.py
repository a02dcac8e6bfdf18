#!/usr/bin/env python3
"""
Reference cleaners for comparison with GMR.

- ENN: Wilson editing, majority class only, unweighted vote, tie retains.
- Tomek: mutual 1-NN opposite-label pairs; the majority member is removed.
- RUS: seeded uniform undersampling of the majority down to |D_min|.
- None: identity.

All samplers are undersamplers: they only drop rows and keep row_ids.
"""

from enum import Enum
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from manifold_rectify.utils.cleaner import CleaningConfig, CleaningReport, clean
from manifold_rectify.utils.data import DataError, Dataset
from manifold_rectify.utils.geometry import DEFAULT_METRIC_THRESHOLD, Metric, knn_all, select_metric


class SamplerId(str, Enum):
    NONE = "None"
    GMR = "GMR"
    ENN = "ENN"
    TOMEK = "Tomek"
    RUS = "RUS"

    @classmethod
    def parse(cls, value) -> 'SamplerId':
        if isinstance(value, SamplerId):
            return value
        lookup = {member.value.lower(): member for member in cls}
        key = str(value).strip().lower()
        if key not in lookup:
            raise ValueError(f"unknown sampler {value!r}; expected one of {[m.value for m in cls]}")
        return lookup[key]


def _empty_report(data: Dataset, sampler: str, metric: Optional[str] = None) -> CleaningReport:
    return CleaningReport(sampler=sampler, n_majority=data.n_majority,
                          n_minority=data.n_minority, resolved_metric=metric)


def no_op(data: Dataset) -> Tuple[Dataset, CleaningReport]:
    """Identity sampler."""
    data.require_both_classes()
    return data, _empty_report(data, SamplerId.NONE.value)


def enn(
    data: Dataset,
    k: int = 3,
    metric: Metric = Metric.AUTO,
    threshold: int = DEFAULT_METRIC_THRESHOLD,
) -> Tuple[Dataset, CleaningReport]:
    """
    Edited Nearest Neighbours on the majority class.

    A majority row is removed when strictly more of its k neighbors (self
    excluded) are minority than majority.

    Raises:
        DataError: Single-class input or N <= k
    """
    data.require_both_classes()
    resolved = select_metric(metric, data.n_features, threshold)
    neighbors = knn_all(data, k, resolved, threshold)
    minority_votes = np.count_nonzero(data.labels[neighbors.indices] == 1, axis=1)
    disagree = (data.labels == 0) & (2 * minority_votes > k)

    report = _empty_report(data, SamplerId.ENN.value, resolved.value)
    report.removed_majority = [int(r) for r in data.row_ids[disagree]]
    return data.without_rows(report.removed_majority), report


def tomek_links(data: Dataset, metric: Metric = Metric.AUTO, threshold: int = DEFAULT_METRIC_THRESHOLD) -> np.ndarray:
    """(L, 2) array of row positions (a, b), a < b, forming Tomek links."""
    resolved = select_metric(metric, data.n_features, threshold)
    nearest = knn_all(data, 1, resolved, threshold).indices[:, 0]
    positions = np.arange(data.n_samples)
    mutual = nearest[nearest] == positions
    opposite = data.labels != data.labels[nearest]
    first = mutual & opposite & (positions < nearest)
    return np.column_stack([positions[first], nearest[first]])


def tomek(
    data: Dataset,
    metric: Metric = Metric.AUTO,
    threshold: int = DEFAULT_METRIC_THRESHOLD,
) -> Tuple[Dataset, CleaningReport]:
    """
    Remove the majority member of every Tomek link.

    Raises:
        DataError: Single-class input or fewer than 2 rows
    """
    data.require_both_classes()
    links = tomek_links(data, metric, threshold)
    majority_positions = [a if data.labels[a] == 0 else b for a, b in links]

    report = _empty_report(data, SamplerId.TOMEK.value, select_metric(metric, data.n_features, threshold).value)
    report.removed_majority = sorted(int(data.row_ids[p]) for p in majority_positions)
    return data.without_rows(report.removed_majority), report


def rus(data: Dataset, seed: int = 0) -> Tuple[Dataset, CleaningReport]:
    """
    Random undersampling of the majority class down to |D_min|.

    Inputs with |D_maj| <= |D_min| are returned unchanged.
    """
    data.require_both_classes()
    report = _empty_report(data, SamplerId.RUS.value)
    surplus = data.n_majority - data.n_minority
    if surplus <= 0:
        return data, report

    majority_ids = np.sort(data.row_ids[data.labels == 0])
    rng = np.random.Generator(np.random.PCG64(seed))
    dropped = rng.choice(majority_ids, size=surplus, replace=False)
    report.removed_majority = sorted(int(r) for r in dropped)
    return data.without_rows(report.removed_majority), report


def apply_sampler(
    sampler: SamplerId,
    data: Dataset,
    config: Optional[CleaningConfig] = None,
    seed: int = 0,
    enn_k: int = 3,
) -> Tuple[Dataset, CleaningReport]:
    """
    Dispatch a sampler by id.

    GMR uses ``config``; ENN and Tomek use the config's metric and
    metric_threshold, ENN also ``enn_k``; RUS uses ``seed``.
    """
    config = config or CleaningConfig()
    dispatch: Dict[SamplerId, Callable[[], Tuple[Dataset, CleaningReport]]] = {
        SamplerId.NONE: lambda: no_op(data),
        SamplerId.GMR: lambda: clean(data, config),
        SamplerId.ENN: lambda: enn(data, enn_k, config.metric, config.metric_threshold),
        SamplerId.TOMEK: lambda: tomek(data, config.metric, config.metric_threshold),
        SamplerId.RUS: lambda: rus(data, seed),
    }
    sampler = SamplerId.parse(sampler)
    if sampler not in dispatch:
        raise DataError(f"no implementation for sampler {sampler!r}")
    return dispatch[sampler]()
