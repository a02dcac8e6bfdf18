#!/usr/bin/env python3
"""
Theory-verification experiments.

- Posterior shift: on two-Gaussian overlap data, compare the kNN minority
  posterior over the overlap region before and after GMR cleaning, with a
  symmetric random-removal control arm.
- Variance reduction: simulate the distance-dependent label-noise
  neighborhood model and compare inverse-distance and uniform estimators.
"""

from dataclasses import asdict, dataclass, field, replace
from typing import Any, Dict, List, Optional

import numpy as np

from manifold_rectify.utils.cleaner import CleaningConfig, clean
from manifold_rectify.utils.confidence import DEFAULT_EPSILON, effective_neighbors, inverse_distance_weights
from manifold_rectify.utils.data import DataError, Dataset, SyntheticSpec, box_muller, generate_overlap
from manifold_rectify.utils.evaluation import PosteriorShiftInput, cleaned_posterior, posterior_shift_lower_bound
from manifold_rectify.utils.geometry import knn_query, select_metric
from manifold_rectify.utils.report import status

OVERLAP_LOW = 0.3
OVERLAP_HIGH = 0.7


def true_posterior(spec: SyntheticSpec, features: np.ndarray) -> np.ndarray:
    """Closed-form P(Y=1|x) for the two isotropic Gaussians, priors from class counts."""
    features = np.atleast_2d(features)
    mu0 = np.asarray(spec.majority_mean, dtype=np.float64)
    mu1 = np.asarray(spec.minority_mean, dtype=np.float64)
    sq0 = np.sum((features - mu0) ** 2, axis=1)
    sq1 = np.sum((features - mu1) ** 2, axis=1)
    log_odds = np.log(spec.n_minority / spec.n_majority) + (sq0 - sq1) / (2.0 * spec.std ** 2)
    return 1.0 / (1.0 + np.exp(-log_odds))


def overlap_region(spec: SyntheticSpec, data: Dataset) -> np.ndarray:
    """Boolean mask of rows whose true minority posterior lies in (0.3, 0.7)."""
    posterior = true_posterior(spec, data.features)
    return (posterior > OVERLAP_LOW) & (posterior < OVERLAP_HIGH)


def knn_posterior_at(points: Dataset, reference: Dataset, config: CleaningConfig) -> np.ndarray:
    """
    Weighted kNN vote for class 1 at each point, against ``reference``,
    excluding the point's own row when it is present in the reference.
    """
    position = {int(row_id): i for i, row_id in enumerate(reference.row_ids)}
    exclude = np.array([position.get(int(row_id), -1) for row_id in points.row_ids], dtype=np.int64)
    resolved = select_metric(config.metric, reference.n_features, config.metric_threshold)
    neighbors = knn_query(points.features, reference.features, config.k, resolved, exclude=exclude)
    weights = inverse_distance_weights(neighbors.distances, config.epsilon)
    return np.sum(weights * (reference.labels[neighbors.indices] == 1), axis=1)


def symmetric_random_removal(data: Dataset, fraction: float, seed: int) -> Dataset:
    """Remove round(fraction * |class|) uniformly random rows from each class."""
    rng = np.random.Generator(np.random.PCG64(seed))
    removed: List[int] = []
    for code in (0, 1):
        ids = np.sort(data.row_ids[data.labels == code])
        count = min(int(round(fraction * len(ids))), len(ids) - 1)
        if count > 0:
            removed.extend(int(r) for r in rng.choice(ids, size=count, replace=False))
    return data.without_rows(removed)


@dataclass
class SeedShift:
    seed: int
    n_overlap: int
    posterior_before: float
    posterior_after: float
    delta: float
    control_delta: Optional[float]
    r0: float
    r1: float
    r0_overlap: float
    predicted_posterior: float
    lower_bound: float


@dataclass
class PosteriorShiftSummary:
    seeds: List[SeedShift] = field(default_factory=list)
    skipped_seeds: List[int] = field(default_factory=list)

    def _mean(self, name: str) -> float:
        values = [getattr(s, name) for s in self.seeds if getattr(s, name) is not None]
        return float(np.mean(values)) if values else float('nan')

    @property
    def mean_before(self) -> float:
        return self._mean('posterior_before')

    @property
    def mean_after(self) -> float:
        return self._mean('posterior_after')

    @property
    def mean_delta(self) -> float:
        return self._mean('delta')

    @property
    def mean_control_delta(self) -> float:
        return self._mean('control_delta')

    @property
    def fraction_positive(self) -> float:
        if not self.seeds:
            return float('nan')
        return sum(1 for s in self.seeds if s.delta > 0) / len(self.seeds)

    @property
    def mean_overlap_removal_ratio(self) -> float:
        """Mean of r0_overlap / r0 over seeds with r0 > 0."""
        ratios = [s.r0_overlap / s.r0 for s in self.seeds if s.r0 > 0]
        return float(np.mean(ratios)) if ratios else float('nan')

    def to_dict(self) -> Dict[str, Any]:
        return {
            'mean_posterior_before': self.mean_before,
            'mean_posterior_after': self.mean_after,
            'mean_delta': self.mean_delta,
            'mean_control_delta': self.mean_control_delta,
            'fraction_positive': self.fraction_positive,
            'mean_overlap_removal_ratio': self.mean_overlap_removal_ratio,
            'skipped_seeds': list(self.skipped_seeds),
            'seeds': [asdict(s) for s in self.seeds],
        }


def posterior_shift_experiment(
    spec: SyntheticSpec,
    config: Optional[CleaningConfig] = None,
    n_seeds: int = 20,
    control: bool = True,
) -> PosteriorShiftSummary:
    """
    Measure the overlap-region posterior shift induced by GMR cleaning.

    Seeds run ``spec.seed .. spec.seed + n_seeds - 1``. Seeds whose overlap
    region is empty are skipped with a warning.

    Raises:
        DataError: If no seed yields an overlap point
    """
    config = (config or CleaningConfig()).validate()
    summary = PosteriorShiftSummary()
    status(f"📊 Posterior shift: IR={spec.imbalance_ratio:.2f}, {n_seeds} seed(s)")

    for offset in range(n_seeds):
        seed = spec.seed + offset
        seed_spec = replace(spec, seed=seed)
        data = generate_overlap(seed_spec)
        in_overlap = overlap_region(seed_spec, data)
        if not in_overlap.any():
            status(f"⚠️  seed {seed}: overlap region is empty, skipped")
            summary.skipped_seeds.append(seed)
            continue

        points = data.take(in_overlap)
        before = knn_posterior_at(points, data, config)
        cleaned, report = clean(data, config)
        after = knn_posterior_at(points, cleaned, config)

        control_delta = None
        if control:
            removed_fraction = (len(report.removed_majority) + len(report.removed_minority)) / data.n_samples
            control_data = symmetric_random_removal(data, removed_fraction, seed)
            control_delta = float(np.mean(knn_posterior_at(points, control_data, config)) - np.mean(before))

        overlap_majority = set(int(r) for r in points.row_ids[points.labels == 0])
        removed_overlap = overlap_majority.intersection(report.removed_majority)
        r0_overlap = len(removed_overlap) / len(overlap_majority) if overlap_majority else 0.0

        summary.seeds.append(SeedShift(
            seed=seed,
            n_overlap=points.n_samples,
            posterior_before=float(np.mean(before)),
            posterior_after=float(np.mean(after)),
            delta=float(np.mean(after) - np.mean(before)),
            control_delta=control_delta,
            r0=report.r0,
            r1=report.r1,
            r0_overlap=r0_overlap,
            predicted_posterior=cleaned_posterior(PosteriorShiftInput(ir=data.imbalance_ratio, r0=report.r0, r1=report.r1)),
            lower_bound=posterior_shift_lower_bound(r0_overlap, data.imbalance_ratio),
        ))

    if not summary.seeds:
        raise DataError("overlap region is empty for every seed; bring the class means closer")
    if summary.skipped_seeds:
        status(f"⚠️  {len(summary.skipped_seeds)} seed(s) had no overlap points")
    status(f"✅ mean delta={summary.mean_delta:.4f}, control={summary.mean_control_delta:.4f}")
    return summary


@dataclass(frozen=True)
class NoiseModel:
    """sigma^2(d) = sigma0_sq * (1 + lam * d); Lipschitz drift L * d."""
    sigma0_sq: float = 0.05
    lam: float = 10.0
    lipschitz: float = 0.0

    def validate(self) -> 'NoiseModel':
        if not self.sigma0_sq > 0:
            raise ValueError(f"sigma0_sq must be positive, got {self.sigma0_sq}")
        if self.lam < 0:
            raise ValueError(f"lambda must be non-negative, got {self.lam}")
        if self.lipschitz < 0:
            raise ValueError(f"lipschitz must be non-negative, got {self.lipschitz}")
        return self

    def variance(self, d: np.ndarray) -> np.ndarray:
        return self.sigma0_sq * (1.0 + self.lam * np.asarray(d, dtype=np.float64))


@dataclass
class VarianceReductionResult:
    mse_geometric: float
    mse_uniform: float
    k_eff: float
    weighted_noise_geometric: float
    weighted_noise_uniform: float
    n_trials: int
    k: int

    def __iter__(self):
        yield self.mse_geometric
        yield self.mse_uniform

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def variance_reduction_experiment(
    noise: NoiseModel,
    k: int = 15,
    n_trials: int = 50000,
    seed: int = 0,
    posterior: float = 0.05,
    epsilon: float = DEFAULT_EPSILON,
) -> VarianceReductionResult:
    """
    Simulate the neighborhood label-noise model and compare estimators.

    Per trial: k distances uniform in [0.1, 1]; neighbor j's label is
    Bernoulli(clip(p + L*d_j + N(0, sigma^2(d_j)), 0, 1)); both estimators
    are scored by squared error against p.

    Unpacks as ``(mse_geometric, mse_uniform)``.
    """
    noise.validate()
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if n_trials < 1:
        raise ValueError(f"n_trials must be at least 1, got {n_trials}")
    if not 0.0 <= posterior <= 1.0:
        raise ValueError(f"posterior must be in [0, 1], got {posterior}")
    if n_trials < 1000:
        status(f"⚠️  n_trials={n_trials} is below 1000; MSE estimates will be noisy")

    rng = np.random.Generator(np.random.PCG64(seed))
    distances = np.sort(0.1 + 0.9 * rng.random((n_trials, k)), axis=1)
    sigma_sq = noise.variance(distances)
    perturbation = np.sqrt(sigma_sq) * box_muller(rng, n_trials * k).reshape(n_trials, k)
    neighbor_p = np.clip(posterior + noise.lipschitz * distances + perturbation, 0.0, 1.0)
    labels = (rng.random((n_trials, k)) < neighbor_p).astype(np.float64)

    weights = inverse_distance_weights(distances, epsilon)
    geometric = np.sum(weights * labels, axis=1)
    uniform = labels.mean(axis=1)

    return VarianceReductionResult(
        mse_geometric=float(np.mean((geometric - posterior) ** 2)),
        mse_uniform=float(np.mean((uniform - posterior) ** 2)),
        k_eff=float(np.mean(effective_neighbors(weights))),
        weighted_noise_geometric=float(np.mean(np.sum(weights ** 2 * sigma_sq, axis=1))),
        weighted_noise_uniform=float(np.mean(np.sum(sigma_sq, axis=1) / k ** 2)),
        n_trials=n_trials,
        k=k,
    )
