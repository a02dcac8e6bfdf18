#!/usr/bin/env python3
"""
GMR asymmetric cleaning.

Majority rows are removed when their neighbors predict the minority class
or their same-class confidence is below alpha. Minority rows become
candidates only when predicted majority with majority confidence above
beta; at most floor(gamma * |D_min|) of them are removed, highest majority
confidence first. Below the scarcity floor nothing is removed.

Confidence is computed once on the full input; removals never trigger
re-estimation.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from manifold_rectify.utils.config import ConfigError
from manifold_rectify.utils.confidence import DEFAULT_EPSILON, ConfidenceTable, estimate
from manifold_rectify.utils.data import DataError, Dataset
from manifold_rectify.utils.geometry import DEFAULT_METRIC_THRESHOLD, Metric, knn_all, select_metric
from manifold_rectify.utils.report import status


@dataclass(frozen=True)
class CleaningConfig:
    k: int = 15
    alpha: float = 0.3
    beta: float = 0.7
    gamma: float = 0.1
    epsilon: float = DEFAULT_EPSILON
    metric: Metric = Metric.AUTO
    metric_threshold: int = DEFAULT_METRIC_THRESHOLD
    scarcity_floor: int = 10

    def validate(self) -> 'CleaningConfig':
        """
        Check invariants; beta >= alpha is a hard requirement.

        Raises:
            ConfigError: On the first violated invariant
        """
        if isinstance(self.k, bool) or not isinstance(self.k, (int, np.integer)) or self.k < 1:
            raise ConfigError(f"k must be a positive integer, got {self.k!r}")
        for name in ('alpha', 'beta', 'gamma'):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1], got {value}")
        if self.beta < self.alpha:
            raise ConfigError(f"beta ({self.beta}) must be >= alpha ({self.alpha})")
        if not self.epsilon > 0:
            raise ConfigError(f"epsilon must be positive, got {self.epsilon}")
        if self.metric_threshold < 1:
            raise ConfigError(f"metric_threshold must be >= 1, got {self.metric_threshold}")
        if self.scarcity_floor < 0:
            raise ConfigError(f"scarcity_floor must be >= 0, got {self.scarcity_floor}")
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {
            'k': int(self.k),
            'alpha': float(self.alpha),
            'beta': float(self.beta),
            'gamma': float(self.gamma),
            'epsilon': float(self.epsilon),
            'metric': Metric.parse(self.metric).value,
            'metric_threshold': int(self.metric_threshold),
            'scarcity_floor': int(self.scarcity_floor),
        }


@dataclass
class CleaningReport:
    """Removal statistics for one sampler pass over a dataset."""
    sampler: str
    n_majority: int
    n_minority: int
    removed_majority: List[int] = field(default_factory=list)
    removed_minority: List[int] = field(default_factory=list)
    skipped_scarcity: bool = False
    minority_candidates: List[Tuple[int, float]] = field(default_factory=list)
    resolved_metric: Optional[str] = None

    @property
    def r0(self) -> float:
        return len(self.removed_majority) / self.n_majority if self.n_majority else 0.0

    @property
    def r1(self) -> float:
        return len(self.removed_minority) / self.n_minority if self.n_minority else 0.0

    @property
    def ir_before(self) -> float:
        return self.n_majority / self.n_minority if self.n_minority else math.inf

    @property
    def ir_after(self) -> float:
        kept_minority = self.n_minority - len(self.removed_minority)
        kept_majority = self.n_majority - len(self.removed_majority)
        return kept_majority / kept_minority if kept_minority else math.inf

    @property
    def asymmetry_ratio(self) -> Optional[float]:
        """|R_maj| / |R_min|; None when no minority row was removed."""
        if not self.removed_minority:
            return None
        return len(self.removed_majority) / len(self.removed_minority)

    def satisfies_asymmetry(self, factor: float = 3.0) -> bool:
        """|R_maj| >= factor * |R_min| (vacuously true without minority removals)."""
        return len(self.removed_majority) >= factor * len(self.removed_minority)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'sampler': self.sampler,
            'n_majority': self.n_majority,
            'n_minority': self.n_minority,
            'removed_majority': sorted(int(r) for r in self.removed_majority),
            'removed_minority': sorted(int(r) for r in self.removed_minority),
            'n_removed_majority': len(self.removed_majority),
            'n_removed_minority': len(self.removed_minority),
            'r0': self.r0,
            'r1': self.r1,
            'ir_before': self.ir_before,
            'ir_after': self.ir_after,
            'asymmetry_ratio': self.asymmetry_ratio,
            'skipped_scarcity': self.skipped_scarcity,
            'minority_candidates': [[int(row_id), float(conf)] for row_id, conf in self.minority_candidates],
            'resolved_metric': self.resolved_metric,
        }

    def summary_line(self) -> str:
        ir_after = "inf" if math.isinf(self.ir_after) else f"{self.ir_after:.4f}"
        return (
            f"removed majority={len(self.removed_majority)} minority={len(self.removed_minority)} "
            f"r0={self.r0:.4f} r1={self.r1:.4f} ir_before={self.ir_before:.4f} ir_after={ir_after}"
            + (" (skipped: minority scarcity)" if self.skipped_scarcity else "")
        )


def removal_rates(report: CleaningReport) -> Tuple[float, float]:
    """(r0, r1): class-conditional removal rates."""
    return report.r0, report.r1


def majority_removal_mask(table: ConfidenceTable, labels: np.ndarray, alpha: float) -> np.ndarray:
    """Majority rows predicted minority OR with self confidence strictly below alpha."""
    return (labels == 0) & ((table.predicted == 1) | (table.self_conf < alpha))


def minority_candidate_mask(table: ConfidenceTable, labels: np.ndarray, beta: float) -> np.ndarray:
    """Minority rows predicted majority AND with majority confidence strictly above beta."""
    return (labels == 1) & (table.predicted == 0) & (table.maj_conf > beta)


def rank_candidates(row_ids: np.ndarray, maj_conf: np.ndarray) -> List[Tuple[int, float]]:
    """Candidates by descending majority confidence, ties by ascending row_id."""
    order = np.lexsort((row_ids, -maj_conf))
    return [(int(row_ids[i]), float(maj_conf[i])) for i in order]


def minority_budget(n_minority: int, gamma: float) -> int:
    # floor(gamma * n); the epsilon guards products like 0.29 * 100 = 28.999999999999996
    return int(math.floor(gamma * n_minority + 1e-9))


def clean(data: Dataset, config: Optional[CleaningConfig] = None) -> Tuple[Dataset, CleaningReport]:
    """
    Apply GMR asymmetric cleaning.

    Args:
        data: Two-class dataset with N >= k + 1 rows
        config: Hyperparameters (defaults match the published table)

    Returns:
        (cleaned dataset in original row order, CleaningReport)

    Raises:
        ConfigError: If beta < alpha or another config invariant fails
        DataError: Single-class input or N <= k
    """
    config = (config or CleaningConfig()).validate()
    data.require_both_classes()

    report = CleaningReport(sampler="GMR", n_majority=data.n_majority, n_minority=data.n_minority)

    if data.n_minority < config.scarcity_floor:
        report.skipped_scarcity = True
        return data, report

    if data.n_samples <= config.k:
        raise DataError(f"need at least k+1 = {config.k + 1} rows for k={config.k}, got {data.n_samples}")

    resolved = select_metric(config.metric, data.n_features, config.metric_threshold)
    report.resolved_metric = resolved.value
    table = estimate(data, knn_all(data, config.k, resolved, config.metric_threshold), config.epsilon)

    majority_mask = majority_removal_mask(table, data.labels, config.alpha)
    report.removed_majority = [int(r) for r in data.row_ids[majority_mask]]

    candidate_mask = minority_candidate_mask(table, data.labels, config.beta)
    report.minority_candidates = rank_candidates(data.row_ids[candidate_mask], table.maj_conf[candidate_mask])

    budget = min(len(report.minority_candidates), minority_budget(data.n_minority, config.gamma))
    report.removed_minority = [row_id for row_id, _ in report.minority_candidates[:budget]]
    if report.removed_minority and report.r1 >= report.r0:
        status(f"⚠️  minority removal rate r1={report.r1:.4f} is not below majority rate r0={report.r0:.4f}")

    cleaned = data.without_rows(report.removed_majority + report.removed_minority)
    return cleaned, report
