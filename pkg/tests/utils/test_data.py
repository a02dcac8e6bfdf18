#!/usr/bin/env python3
"""
Unit tests for utils.data module

Covers CSV ingestion and export, stratified splitting, and the synthetic
two-Gaussian generator.
"""

import math
import os

import numpy as np
import pandas as pd
import pytest

from manifold_rectify.utils.data import (
    DataError,
    Dataset,
    SplitSpec,
    SyntheticSpec,
    box_muller,
    export_csv,
    generate_overlap,
    load_csv,
    stratified_split,
)
from manifold_rectify.utils.geometry import Metric, knn_query

DATA_DIR = os.path.join(os.path.dirname(__file__), '..', 'fixtures', 'data')


def fixture_path(name: str) -> str:
    return os.path.join(DATA_DIR, name)


def make_dataset(n_majority: int, n_minority: int, dim: int = 2) -> Dataset:
    features = np.arange((n_majority + n_minority) * dim, dtype=float).reshape(-1, dim)
    labels = [0] * n_majority + [1] * n_minority
    return Dataset.from_arrays(features, labels)


class TestDataset:
    """Test Dataset construction and subsetting."""

    def test_from_arrays_defaults(self):
        """Row ids default to 0..N-1 and feature names to x0.."""
        data = Dataset.from_arrays([[0.0, 1.0], [2.0, 3.0]], [0, 1])
        assert list(data.row_ids) == [0, 1]
        assert data.feature_names == ['x0', 'x1']
        assert data.n_minority == 1 and data.n_majority == 1

    def test_rejects_non_binary_labels(self):
        """Labels outside {0, 1} are a data error."""
        with pytest.raises(DataError, match="only 0 and 1"):
            Dataset.from_arrays([[0.0], [1.0]], [0, 2])

    def test_rejects_fractional_labels(self):
        """A label of 0.7 is rejected rather than truncated to 0."""
        with pytest.raises(DataError, match="only 0 and 1"):
            Dataset.from_arrays([[0.0], [1.0]], [1, 0.7])

    def test_rejects_duplicate_row_ids(self):
        """Row ids must be unique."""
        with pytest.raises(DataError, match="unique"):
            Dataset.from_arrays([[0.0], [1.0]], [0, 1], row_ids=[3, 3])

    def test_imbalance_ratio(self):
        """rho is majority over minority; inf without minority."""
        assert make_dataset(10, 2).imbalance_ratio == 5.0
        assert make_dataset(3, 0).imbalance_ratio == float('inf')

    def test_without_rows_keeps_order_and_ids(self):
        """Removing rows preserves original order and row ids."""
        data = make_dataset(4, 2)
        kept = data.without_rows([1, 4])
        assert list(kept.row_ids) == [0, 2, 3, 5]
        assert np.array_equal(kept.features, data.features[[0, 2, 3, 5]])

    def test_require_both_classes(self):
        """Single-class data is rejected."""
        with pytest.raises(DataError, match="both classes"):
            make_dataset(5, 0).require_both_classes()


class TestLoadCsv:
    """Test load_csv with valid and invalid files."""

    def test_load_tiny_fixture(self):
        """Features, labels and row ids come out in file order."""
        data = load_csv(fixture_path('tiny.csv'), 'label')
        assert data.n_samples == 10
        assert data.feature_names == ['x', 'y']
        assert list(data.row_ids) == list(range(10))
        assert data.n_minority == 4
        assert data.label_mapping == {'0': 0, '1': 1}

    def test_minority_is_less_frequent_label(self):
        """String labels: the rarer value maps to 1."""
        data = load_csv(fixture_path('intrusion.csv'), 'label')
        assert data.label_mapping == {'normal': 0, 'attack': 1}
        assert data.n_minority == 20
        assert data.n_majority == 180

    def test_explicit_minority_label(self):
        """--minority-label overrides the frequency rule."""
        data = load_csv(fixture_path('tiny.csv'), 'label', minority_label='0')
        assert data.n_minority == 6

    def test_unknown_minority_label(self):
        """An explicit minority label absent from the column is an error."""
        with pytest.raises(DataError, match="not found"):
            load_csv(fixture_path('tiny.csv'), 'label', minority_label='7')

    def test_missing_file(self):
        """A missing input file is a data error."""
        with pytest.raises(DataError, match="not found"):
            load_csv(fixture_path('nope.csv'), 'label')

    def test_missing_label_column(self):
        """The error lists the available columns."""
        with pytest.raises(DataError, match="'target' not found"):
            load_csv(fixture_path('tiny.csv'), 'target')

    def test_three_labels(self):
        """Label cardinality other than 2 is rejected."""
        with pytest.raises(DataError, match="exactly 2 distinct values, found 3"):
            load_csv(fixture_path('three_labels.csv'), 'label')

    def test_non_numeric_cell_names_row_and_column(self):
        """The message pins the first bad cell."""
        with pytest.raises(DataError, match=r"'abc' at row 2 \(line 3\), column 'y'"):
            load_csv(fixture_path('bad_cell.csv'), 'label')

    def test_ambiguous_label_header(self, tmp_path):
        """A duplicated label header cannot be resolved."""
        path = tmp_path / 'dup.csv'
        path.write_text("x,label,label\n0,0,0\n1,1,1\n")
        with pytest.raises(DataError, match="ambiguous"):
            load_csv(str(path), 'label')

    def test_column_named_like_a_duplicate(self, tmp_path):
        """A genuine 'label.1' feature column next to 'label' is not a duplicate header."""
        path = tmp_path / 'suffix.csv'
        path.write_text("x,label.1,label\n0,5,0\n1,6,1\n2,7,0\n")
        data = load_csv(str(path), 'label')
        assert data.feature_names == ['x', 'label.1']
        assert data.features[:, 1].tolist() == [5.0, 6.0, 7.0]

    def test_frequency_tie_picks_smaller_label(self, tmp_path):
        """Labels {a, a, b, b}: the lexicographically smaller label becomes the minority."""
        path = tmp_path / 'tie.csv'
        path.write_text("x,label\n0,b\n1,a\n2,b\n3,a\n")
        data = load_csv(str(path), 'label')
        assert data.label_mapping == {'b': 0, 'a': 1}
        assert data.labels.tolist() == [0, 1, 0, 1]

    def test_infinite_cell_rejected(self, tmp_path):
        """inf parses as a float but is not finite."""
        path = tmp_path / 'inf.csv'
        path.write_text("x,label\n0,a\ninf,b\n")
        with pytest.raises(DataError, match="row 2"):
            load_csv(str(path), 'label')


class TestExportCsv:
    """Test export_csv output layout."""

    def test_raw_labels_written_last(self, tmp_path):
        """Features keep input order; the label column is last with raw values."""
        data = load_csv(fixture_path('intrusion.csv'), 'label')
        out = tmp_path / 'out.csv'
        export_csv(data.take(np.arange(5)), str(out))
        frame = pd.read_csv(out, dtype=str)
        assert list(frame.columns) == ['duration', 'bytes_in', 'bytes_out', 'failed_logins', 'label']
        assert set(frame['label']) <= {'normal', 'attack'}

    def test_reload_gives_same_values(self, tmp_path):
        """Exported floats read back to the same float64 values."""
        data = generate_overlap(SyntheticSpec.separated(20, 5, seed=3))
        out = tmp_path / 'synthetic.csv'
        export_csv(data, str(out))
        reloaded = load_csv(str(out), 'label', minority_label='1')
        np.testing.assert_allclose(reloaded.features, data.features, rtol=1e-15, atol=0)
        assert np.array_equal(reloaded.labels, data.labels)

    def test_unix_line_endings(self, tmp_path):
        """Output uses '\\n' regardless of platform."""
        out = tmp_path / 'tiny_out.csv'
        export_csv(load_csv(fixture_path('tiny.csv'), 'label'), str(out))
        assert b'\r\n' not in out.read_bytes()


class TestStratifiedSplit:
    """Test seeded stratified splitting."""

    def test_counts_use_half_up_rounding(self):
        """round(0.2 * 45) = 9 majority and round(0.2 * 5) = 1 minority test rows."""
        train, test = stratified_split(make_dataset(45, 5), SplitSpec(test_fraction=0.2, seed=42))
        assert test.n_majority == 9 and test.n_minority == 1
        assert train.n_majority == 36 and train.n_minority == 4

    def test_floor_of_one(self):
        """Tiny classes still contribute one test row."""
        _, test = stratified_split(make_dataset(20, 2), SplitSpec(test_fraction=0.1, seed=0))
        assert test.n_minority == 1

    def test_partition_is_disjoint_and_complete(self):
        """Train and test row ids partition the input."""
        data = make_dataset(30, 10)
        train, test = stratified_split(data, SplitSpec(seed=7))
        assert set(train.row_ids).isdisjoint(test.row_ids)
        assert set(train.row_ids) | set(test.row_ids) == set(data.row_ids)

    def test_deterministic(self):
        """Same seed gives the same split; a different seed usually differs."""
        data = make_dataset(50, 10)
        first = stratified_split(data, SplitSpec(seed=1))[1].row_ids
        second = stratified_split(data, SplitSpec(seed=1))[1].row_ids
        other = stratified_split(data, SplitSpec(seed=2))[1].row_ids
        assert np.array_equal(first, second)
        assert not np.array_equal(first, other)

    def test_independent_of_row_order(self):
        """Rows are ordered by row_id before shuffling."""
        data = make_dataset(30, 10)
        reversed_data = data.take(np.arange(data.n_samples)[::-1])
        a = set(stratified_split(data, SplitSpec(seed=5))[1].row_ids)
        b = set(stratified_split(reversed_data, SplitSpec(seed=5))[1].row_ids)
        assert a == b

    @pytest.mark.parametrize('fraction', [0.2, 0.25, 0.5])
    def test_rounding_rule_for_all_small_classes(self, fraction):
        """Every class size 2..50 gets round-half-up(fraction * size) test rows, clamped to [1, size - 1]."""
        for n_majority, n_minority in zip(range(2, 51), range(50, 1, -1)):
            train, test = stratified_split(make_dataset(n_majority, n_minority), SplitSpec(fraction, seed=3))
            for size, n_test, n_train in ((n_majority, test.n_majority, train.n_majority),
                                          (n_minority, test.n_minority, train.n_minority)):
                expected = min(max(math.floor(fraction * size + 0.5), 1), size - 1)
                assert n_test == expected, (fraction, size)
                assert n_train == size - expected

    def test_class_too_small(self):
        """A class with a single member cannot be split."""
        with pytest.raises(DataError, match="at least 2"):
            stratified_split(make_dataset(10, 1), SplitSpec())

    @pytest.mark.parametrize('fraction', [0.0, 1.0, -0.1])
    def test_fraction_range(self, fraction):
        """test_fraction must lie strictly inside (0, 1)."""
        with pytest.raises(DataError, match="test_fraction"):
            stratified_split(make_dataset(10, 10), SplitSpec(test_fraction=fraction))


class TestGenerateOverlap:
    """Test the synthetic two-Gaussian generator."""

    def test_shape_and_order(self):
        """Majority rows come first, then minority rows."""
        data = generate_overlap(SyntheticSpec.separated(30, 6, dim=3, seed=1))
        assert data.features.shape == (36, 3)
        assert list(data.labels[:30]) == [0] * 30
        assert list(data.labels[30:]) == [1] * 6

    def test_seeded(self):
        """Same seed reproduces the data bit for bit."""
        spec = SyntheticSpec.separated(40, 8, seed=9)
        assert np.array_equal(generate_overlap(spec).features, generate_overlap(spec).features)

    def test_class_means_follow_settings(self):
        """Large samples land near the requested means."""
        spec = SyntheticSpec(n_majority=4000, n_minority=4000, majority_mean=(0.0, 0.0),
                             minority_mean=(3.0, -1.0), std=0.5, seed=2)
        data = generate_overlap(spec)
        assert np.allclose(data.features[data.labels == 0].mean(axis=0), [0.0, 0.0], atol=0.05)
        assert np.allclose(data.features[data.labels == 1].mean(axis=0), [3.0, -1.0], atol=0.05)

    def test_identical_means_overlap(self):
        """Equal means: sample means agree within 3 std / sqrt(n) on nearly every seed and axis."""
        n = 200
        within = 0
        for seed in range(50):
            spec = SyntheticSpec(n_majority=n, n_minority=n, majority_mean=(0.0, 0.0),
                                 minority_mean=(0.0, 0.0), std=1.0, seed=seed)
            data = generate_overlap(spec)
            gap = np.abs(data.features[data.labels == 0].mean(axis=0) - data.features[data.labels == 1].mean(axis=0))
            within += int(np.count_nonzero(gap <= 3.0 / math.sqrt(n)))
        # each axis of each seed is one check; about 3% may fall outside by chance
        assert within >= 90

    def test_far_apart_means_are_separable(self):
        """Means 10 std apart: 1-NN on a fresh holdout is at least 99% accurate."""
        train = generate_overlap(SyntheticSpec.separated(200, 200, separation=10.0, seed=1))
        holdout = generate_overlap(SyntheticSpec.separated(200, 200, separation=10.0, seed=2))
        nearest = knn_query(holdout.features, train.features, 1, Metric.EUCLIDEAN).indices[:, 0]
        accuracy = np.mean(train.labels[nearest] == holdout.labels)
        assert accuracy >= 0.99

    def test_mismatched_means(self):
        """Mean vectors must share a dimension."""
        spec = SyntheticSpec(n_majority=5, n_minority=5, majority_mean=(0.0,), minority_mean=(1.0, 1.0))
        with pytest.raises(DataError, match="mean dimensions differ"):
            generate_overlap(spec)

    def test_non_positive_std(self):
        """std must be positive."""
        with pytest.raises(DataError, match="std"):
            generate_overlap(SyntheticSpec.separated(5, 5, std=0.0))

    def test_box_muller_moments(self):
        """Box-Muller draws are roughly standard normal."""
        draws = box_muller(np.random.Generator(np.random.PCG64(0)), 100001)
        assert draws.shape == (100001,)
        assert abs(draws.mean()) < 0.02
        assert abs(draws.std() - 1.0) < 0.02
