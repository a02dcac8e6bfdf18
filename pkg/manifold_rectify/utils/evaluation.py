#!/usr/bin/env python3
"""
Evaluation utilities: built-in kNN scorer, AUPRC (average precision),
empirical asymmetric risk, and the cleaned-posterior calculator.
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from sklearn.metrics import average_precision_score

from manifold_rectify.utils.confidence import DEFAULT_EPSILON, inverse_distance_weights, votes_from_weights
from manifold_rectify.utils.data import DataError, Dataset
from manifold_rectify.utils.geometry import DEFAULT_METRIC_THRESHOLD, Metric, knn_query, select_metric
from manifold_rectify.utils.report import status


@dataclass(frozen=True)
class CostMatrix:
    """c01: false-negative cost; c10: false-positive cost."""
    c01: float = 1.0
    c10: float = 1.0

    def __post_init__(self):
        if self.c01 < 0 or self.c10 < 0:
            raise ValueError(f"costs must be non-negative, got c01={self.c01}, c10={self.c10}")
        if self.c01 < self.c10:
            status(f"⚠️  c01 ({self.c01}) < c10 ({self.c10}): false negatives cost less than false positives")


@dataclass(frozen=True)
class PosteriorShiftInput:
    ir: float
    r0: float
    r1: float
    p0: Optional[float] = None
    p1: Optional[float] = None

    def validate(self) -> 'PosteriorShiftInput':
        if not self.ir > 0:
            raise ValueError(f"ir must be positive, got {self.ir}")
        for name in ('r0', 'r1'):
            value = getattr(self, name)
            if not 0.0 <= value < 1.0:
                raise ValueError(f"{name} must be in [0, 1), got {value}")
        if (self.p0 is None) != (self.p1 is None):
            raise ValueError("p0 and p1 must be given together")
        if self.p0 is not None:
            if not (0.0 <= self.p0 <= 1.0 and 0.0 <= self.p1 <= 1.0):
                raise ValueError(f"p0, p1 must be in [0, 1], got {self.p0}, {self.p1}")
            if abs(self.p0 + self.p1 - 1.0) > 1e-9:
                raise ValueError(f"p0 + p1 must equal 1, got {self.p0 + self.p1}")
        return self


def knn_classifier_scores(
    train: Dataset,
    test: Dataset,
    k: int,
    metric: Metric = Metric.AUTO,
    epsilon: float = DEFAULT_EPSILON,
    threshold: int = DEFAULT_METRIC_THRESHOLD,
) -> np.ndarray:
    """
    Minority scores for test rows: inverse-distance weighted vote_1 over the
    k nearest train rows.

    Raises:
        DataError: Single-class train set or |train| < k
    """
    train.require_both_classes()
    if train.n_samples < k:
        raise DataError(f"train set has {train.n_samples} rows, smaller than k={k}")
    if test.n_features != train.n_features:
        raise DataError(f"dimension mismatch: train {train.n_features}, test {test.n_features}")
    resolved = select_metric(metric, train.n_features, threshold)
    neighbors = knn_query(test.features, train.features, k, resolved)
    weights = inverse_distance_weights(neighbors.distances, epsilon)
    _, vote_1 = votes_from_weights(weights, train.labels[neighbors.indices])
    return vote_1


def auprc(scores: Sequence[float], labels: Sequence[int]) -> float:
    """
    Average precision with tied scores processed as one group.

    Every positive in a tie group receives the precision measured after the
    whole group.

    Raises:
        DataError: Length mismatch or no positive label
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if scores.shape != labels.shape:
        raise DataError(f"length mismatch: {scores.size} scores, {labels.size} labels")
    n_positive = int(np.count_nonzero(labels == 1))
    if n_positive == 0:
        raise DataError("auprc needs at least one positive label")

    # distinct thresholds: a tie group enters the curve as one step
    return float(average_precision_score((labels == 1).astype(np.int64), scores))


def compute_asymmetric_risk(predictions: Sequence[int], labels: Sequence[int], costs: CostMatrix) -> float:
    """
    Empirical asymmetric risk c01 * pi1 * FNR + c10 * pi0 * FPR.

    Raises:
        DataError: Length mismatch or single-class labels
    """
    predictions = np.asarray(predictions, dtype=np.int64)
    labels = np.asarray(labels, dtype=np.int64)
    if predictions.shape != labels.shape:
        raise DataError(f"length mismatch: {predictions.size} predictions, {labels.size} labels")
    n_positive = int(np.count_nonzero(labels == 1))
    n_negative = int(np.count_nonzero(labels == 0))
    if n_positive == 0 or n_negative == 0:
        raise DataError("asymmetric risk needs both classes in labels")

    n_total = labels.size
    fnr = np.count_nonzero((labels == 1) & (predictions == 0)) / n_positive
    fpr = np.count_nonzero((labels == 0) & (predictions == 1)) / n_negative
    return float(costs.c01 * (n_positive / n_total) * fnr + costs.c10 * (n_negative / n_total) * fpr)


def cleaned_posterior(shift: PosteriorShiftInput) -> float:
    """
    Minority posterior after removing fractions r0 / r1 of each class.

    With local posteriors: p1(1-r1) / (p1(1-r1) + p0(1-r0)).
    Without: (1-r1) / (IR(1-r0) + (1-r1)).

    Examples:
        cleaned_posterior(PosteriorShiftInput(ir=10, r0=0.2, r1=0.05))  # 0.95 / 8.95
    """
    shift.validate()
    if shift.p1 is not None:
        numerator = shift.p1 * (1.0 - shift.r1)
        denominator = numerator + shift.p0 * (1.0 - shift.r0)
    else:
        numerator = 1.0 - shift.r1
        denominator = shift.ir * (1.0 - shift.r0) + numerator
    if denominator == 0:
        raise ValueError("cleaned posterior is undefined: denominator is zero")
    return numerator / denominator


def uncleaned_posterior(shift: PosteriorShiftInput) -> float:
    """The same quantity with r0 = r1 = 0."""
    return cleaned_posterior(PosteriorShiftInput(ir=shift.ir, r0=0.0, r1=0.0, p0=shift.p0, p1=shift.p1))


def posterior_shift_lower_bound(r0_omega: float, ir: float) -> float:
    """r0_omega * IR / (1 + IR)^2: shift bound given a local majority removal rate."""
    return r0_omega * ir / (1.0 + ir) ** 2
