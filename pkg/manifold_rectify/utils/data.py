#!/usr/bin/env python3
"""
Dataset representation, CSV ingestion/export, seeded stratified splitting,
and synthetic two-Gaussian overlap data.

Labels are binary codes: 1 is the minority class, 0 the majority class.
Features are used as given; scaling, categorical encoding and imputation
are the caller's responsibility.
"""

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd


class DataError(ValueError):
    """Exception raised for invalid input data or data-dependent preconditions."""
    pass


@dataclass(eq=False)
class Dataset:
    """
    Feature matrix plus binary labels and stable row identifiers.

    ``label_mapping`` maps raw label strings to codes and is carried through
    every subset so exports write the original raw values back.
    """
    features: np.ndarray
    labels: np.ndarray
    row_ids: np.ndarray
    feature_names: List[str] = field(default_factory=list)
    label_column: str = "label"
    label_mapping: Dict[str, int] = field(default_factory=lambda: {"0": 0, "1": 1})

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        if self.features.ndim == 1:
            self.features = self.features.reshape(-1, 1)
        raw_labels = np.asarray(self.labels)
        if not np.isin(raw_labels, (0, 1)).all():
            raise DataError("labels must contain only 0 and 1")
        self.labels = raw_labels.astype(np.int64)
        self.row_ids = np.asarray(self.row_ids, dtype=np.int64)
        n_rows = self.features.shape[0]
        if self.labels.shape != (n_rows,) or self.row_ids.shape != (n_rows,):
            raise DataError(
                f"features ({n_rows} rows), labels {self.labels.shape} and row_ids {self.row_ids.shape} disagree"
            )
        if len(np.unique(self.row_ids)) != n_rows:
            raise DataError("row_ids must be unique")
        if not self.feature_names:
            self.feature_names = [f"x{j}" for j in range(self.n_features)]

    @classmethod
    def from_arrays(cls, features, labels, row_ids: Optional[Sequence[int]] = None) -> 'Dataset':
        """Build a Dataset from in-memory arrays; row_ids default to 0..N-1."""
        labels = np.asarray(labels)
        if row_ids is None:
            row_ids = np.arange(len(labels))
        return cls(features=features, labels=labels, row_ids=row_ids)

    @property
    def n_samples(self) -> int:
        return int(self.features.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.features.shape[1])

    @property
    def n_minority(self) -> int:
        return int(np.count_nonzero(self.labels == 1))

    @property
    def n_majority(self) -> int:
        return int(np.count_nonzero(self.labels == 0))

    @property
    def imbalance_ratio(self) -> float:
        """rho = |D_maj| / |D_min| (inf when there is no minority row)."""
        if self.n_minority == 0:
            return math.inf
        return self.n_majority / self.n_minority

    def has_both_classes(self) -> bool:
        return self.n_minority > 0 and self.n_majority > 0

    def require_both_classes(self) -> None:
        if not self.has_both_classes():
            raise DataError(
                f"dataset must contain both classes (majority={self.n_majority}, minority={self.n_minority})"
            )

    def take(self, positions: np.ndarray) -> 'Dataset':
        """Subset by row positions (or boolean mask); metadata is carried over."""
        positions = np.asarray(positions)
        return Dataset(
            features=self.features[positions],
            labels=self.labels[positions],
            row_ids=self.row_ids[positions],
            feature_names=list(self.feature_names),
            label_column=self.label_column,
            label_mapping=dict(self.label_mapping),
        )

    def without_rows(self, removed_row_ids) -> 'Dataset':
        """Return the dataset minus the given row_ids, original order preserved."""
        keep = ~np.isin(self.row_ids, np.asarray(list(removed_row_ids), dtype=np.int64))
        return self.take(keep)

    def raw_labels(self) -> List[str]:
        """Labels translated back to raw source values."""
        inverse = {code: raw for raw, code in self.label_mapping.items()}
        return [inverse[int(code)] for code in self.labels]


@dataclass(frozen=True)
class SplitSpec:
    test_fraction: float = 0.2
    seed: int = 42


@dataclass(frozen=True)
class SyntheticSpec:
    """Two isotropic Gaussians sharing one standard deviation."""
    n_majority: int
    n_minority: int
    majority_mean: Tuple[float, ...]
    minority_mean: Tuple[float, ...]
    std: float = 1.0
    seed: int = 0

    @property
    def imbalance_ratio(self) -> float:
        return self.n_majority / self.n_minority

    @classmethod
    def separated(cls, n_majority: int, n_minority: int, dim: int = 2, separation: float = 1.0,
                  std: float = 1.0, seed: int = 0) -> 'SyntheticSpec':
        """Majority at the origin, minority shifted by ``separation * std`` along the first axis."""
        minority_mean = [0.0] * dim
        minority_mean[0] = separation * std
        return cls(n_majority=n_majority, n_minority=n_minority,
                   majority_mean=tuple([0.0] * dim), minority_mean=tuple(minority_mean),
                   std=std, seed=seed)


def _minority_label(raw_labels: pd.Series, minority_label: Optional[str]) -> str:
    counts = raw_labels.value_counts()
    if minority_label is not None:
        if minority_label not in counts.index:
            raise DataError(
                f"minority label {minority_label!r} not found; label values are {sorted(counts.index)}"
            )
        return minority_label
    # less frequent wins; on ties the lexicographically smaller raw label
    return min(counts.index, key=lambda raw: (counts[raw], raw))


def load_csv(path: str, label_column: str, minority_label: Optional[str] = None) -> Dataset:
    """
    Load a binary-labelled CSV file into a Dataset.

    Args:
        path: CSV file with a header row (UTF-8, '.' decimal separator)
        label_column: Name of the label column
        minority_label: Raw label value mapped to 1; if None the less
            frequent label is used (ties: lexicographically smaller)

    Returns:
        Dataset with row_ids 0..N-1 in file order

    Raises:
        DataError: Missing file, missing or ambiguous label column, label
            cardinality other than 2, or a non-finite feature cell
    """
    csv_path = Path(path)
    if not csv_path.is_file():
        raise DataError(f"input file not found: {path}")

    try:
        header = pd.read_csv(csv_path, header=None, nrows=1, dtype=str, keep_default_na=False, encoding='utf-8')
        frame = pd.read_csv(csv_path, dtype=str, keep_default_na=False, encoding='utf-8')
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise DataError(f"could not parse {path}: {e}")

    columns = list(frame.columns)
    raw_header = [str(name) for name in header.iloc[0]]
    if label_column not in raw_header:
        raise DataError(f"label column {label_column!r} not found in {path}; columns are {columns}")
    if raw_header.count(label_column) > 1:
        raise DataError(f"label column {label_column!r} is ambiguous in {path}: header appears more than once")

    raw_labels = frame[label_column].astype(str)
    distinct = sorted(raw_labels.unique())
    if len(distinct) != 2:
        raise DataError(f"label column {label_column!r} must have exactly 2 distinct values, found {len(distinct)}: {distinct[:10]}")

    minority = _minority_label(raw_labels, minority_label)
    majority = distinct[0] if distinct[1] == minority else distinct[1]
    mapping = {majority: 0, minority: 1}

    feature_names = [name for name in columns if name != label_column]
    if not feature_names:
        raise DataError(f"{path} has no feature columns besides {label_column!r}")

    numeric = frame[feature_names].apply(pd.to_numeric, errors='coerce')
    values = numeric.to_numpy(dtype=np.float64)
    bad = ~np.isfinite(values)
    if bad.any():
        row, col = map(int, np.argwhere(bad)[0])
        cell = frame.iloc[row][feature_names[col]]
        raise DataError(
            f"non-finite feature value {cell!r} at row {row + 1} (line {row + 2}), column {feature_names[col]!r}"
        )

    labels = raw_labels.map(mapping).to_numpy(dtype=np.int64)
    return Dataset(
        features=values,
        labels=labels,
        row_ids=np.arange(len(frame), dtype=np.int64),
        feature_names=feature_names,
        label_column=label_column,
        label_mapping=mapping,
    )


def to_frame(data: Dataset) -> pd.DataFrame:
    """Feature columns in input order plus the label column (raw values) last."""
    frame = pd.DataFrame(data.features, columns=data.feature_names)
    frame[data.label_column] = data.raw_labels()
    return frame


def export_csv(data: Dataset, path: str) -> str:
    """
    Write a Dataset to CSV with features in input order and raw labels last.

    Floats use the shortest repr that round-trips exactly.
    """
    frame = to_frame(data)
    frame.to_csv(path, index=False, lineterminator='\n', float_format=None)
    return path


def _split_count(class_size: int, test_fraction: float) -> int:
    # half-up rounding, floor 1, and at least one training member kept
    count = int(math.floor(test_fraction * class_size + 0.5))
    return min(max(count, 1), class_size - 1)


def stratified_split(data: Dataset, spec: SplitSpec) -> Tuple[Dataset, Dataset]:
    """
    Seeded stratified train/test split.

    Per class c, ``round(test_fraction * |c|)`` rows (floor 1) go to test,
    chosen by a PCG64 shuffle of the class's rows in ascending row_id order.

    Raises:
        DataError: If test_fraction is outside (0, 1) or a class has < 2 members
    """
    if not 0.0 < spec.test_fraction < 1.0:
        raise DataError(f"test_fraction must be in (0, 1), got {spec.test_fraction}")
    for code in (0, 1):
        size = int(np.count_nonzero(data.labels == code))
        if size < 2:
            raise DataError(f"class {code} has {size} member(s); stratified split needs at least 2")

    rng = np.random.Generator(np.random.PCG64(spec.seed))
    test_mask = np.zeros(data.n_samples, dtype=bool)
    for code in (0, 1):
        positions = np.flatnonzero(data.labels == code)
        positions = positions[np.argsort(data.row_ids[positions], kind='stable')]
        shuffled = rng.permutation(positions)
        test_mask[shuffled[:_split_count(len(positions), spec.test_fraction)]] = True

    return data.take(~test_mask), data.take(test_mask)


def box_muller(rng: np.random.Generator, count: int) -> np.ndarray:
    """Standard normal draws via Box-Muller over PCG64 uniforms."""
    pairs = (count + 1) // 2
    u1 = 1.0 - rng.random(pairs)
    u2 = rng.random(pairs)
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    return np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])[:count]


def generate_overlap(spec: SyntheticSpec) -> Dataset:
    """
    Draw a two-Gaussian dataset: majority rows first, then minority rows.

    Raises:
        DataError: Mismatched mean dimensions, non-positive std, or a class
            count below 1
    """
    majority_mean = np.asarray(spec.majority_mean, dtype=np.float64)
    minority_mean = np.asarray(spec.minority_mean, dtype=np.float64)
    if majority_mean.shape != minority_mean.shape or majority_mean.ndim != 1 or majority_mean.size == 0:
        raise DataError(
            f"mean dimensions differ: majority {majority_mean.shape}, minority {minority_mean.shape}"
        )
    if not spec.std > 0:
        raise DataError(f"std must be positive, got {spec.std}")
    if spec.n_majority < 1 or spec.n_minority < 1:
        raise DataError("n_majority and n_minority must both be at least 1")

    dim = majority_mean.size
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    n_total = spec.n_majority + spec.n_minority
    noise = box_muller(rng, n_total * dim).reshape(n_total, dim) * spec.std
    centers = np.vstack([
        np.repeat(majority_mean[None, :], spec.n_majority, axis=0),
        np.repeat(minority_mean[None, :], spec.n_minority, axis=0),
    ])
    labels = np.concatenate([np.zeros(spec.n_majority, dtype=np.int64), np.ones(spec.n_minority, dtype=np.int64)])
    return Dataset.from_arrays(centers + noise, labels)
