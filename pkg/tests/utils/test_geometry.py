#!/usr/bin/env python3
"""
Unit tests for utils.geometry module

kNN results are checked against a pure-Python brute-force oracle.
"""

import math

import numpy as np
import pytest

from manifold_rectify.utils import geometry
from manifold_rectify.utils.data import DataError, Dataset
from manifold_rectify.utils.geometry import (
    Metric,
    distance,
    knn_all,
    knn_query,
    pairwise_distances,
    relative_contrast,
    select_metric,
)


def oracle_distance(a, b, metric: Metric) -> float:
    if metric == Metric.EUCLIDEAN:
        return math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))
    na = math.sqrt(sum(x * x for x in a))
    nb = math.sqrt(sum(y * y for y in b))
    if na == 0 or nb == 0:
        return 1.0
    return min(2.0, max(0.0, 1.0 - sum(x * y for x, y in zip(a, b)) / (na * nb)))


def oracle_knn(features, k: int, metric: Metric):
    rows = features.tolist()
    result = []
    for i, row in enumerate(rows):
        candidates = [(oracle_distance(row, other, metric), j) for j, other in enumerate(rows) if j != i]
        candidates.sort()
        result.append(candidates[:k])
    return result


class TestSelectMetric:
    """Test adaptive metric resolution."""

    def test_boundary_at_threshold(self):
        """d = 100 resolves to Euclidean; d = 101 to cosine."""
        assert select_metric(Metric.AUTO, 100) == Metric.EUCLIDEAN
        assert select_metric(Metric.AUTO, 101) == Metric.COSINE

    def test_explicit_metric_passes_through(self):
        """Explicit choices ignore the dimension."""
        assert select_metric(Metric.COSINE, 2) == Metric.COSINE
        assert select_metric('euclidean', 5000) == Metric.EUCLIDEAN

    def test_custom_threshold(self):
        """The switch point is configurable."""
        assert select_metric(Metric.AUTO, 11, threshold=10) == Metric.COSINE
        assert select_metric(Metric.AUTO, 10, threshold=10) == Metric.EUCLIDEAN

    def test_parse_unknown_metric(self):
        """Unknown names are rejected."""
        with pytest.raises(ValueError, match="unknown metric"):
            Metric.parse('manhattan')


class TestDistance:
    """Test single-pair and pairwise distances."""

    def test_euclidean_345(self):
        """Classic 3-4-5 triangle."""
        assert distance([0, 0], [3, 4], Metric.EUCLIDEAN) == 5.0

    def test_cosine_parallel_vectors(self):
        """Parallel vectors have cosine distance 0."""
        assert distance([1, 2], [2, 4], Metric.COSINE) == pytest.approx(0.0, abs=1e-12)

    def test_cosine_opposite_vectors(self):
        """Opposite vectors have cosine distance 2."""
        assert distance([1, 0], [-3, 0], Metric.COSINE) == pytest.approx(2.0, abs=1e-12)

    def test_cosine_zero_vector(self):
        """A zero vector has similarity 0, hence distance 1."""
        assert distance([0, 0], [1, 1], Metric.COSINE) == 1.0

    @pytest.mark.parametrize('metric', [Metric.EUCLIDEAN, Metric.COSINE])
    def test_symmetric(self, metric):
        """distance(a, b) equals distance(b, a) to 1e-12 relative."""
        rng = np.random.Generator(np.random.PCG64(8))
        for _ in range(200):
            dim = int(rng.integers(1, 12))
            a, b = rng.normal(size=dim) * 10.0, rng.normal(size=dim)
            assert distance(a, b, metric) == pytest.approx(distance(b, a, metric), rel=1e-12, abs=1e-15)

    def test_dimension_mismatch(self):
        """Vectors of different length are a data error."""
        with pytest.raises(DataError, match="dimension mismatch"):
            distance([0, 0], [1, 1, 1], Metric.EUCLIDEAN)

    def test_auto_is_not_a_distance(self):
        """Auto must be resolved before computing distances."""
        with pytest.raises(ValueError):
            pairwise_distances(np.zeros((1, 2)), np.zeros((1, 2)), Metric.AUTO)

    def test_pairwise_matches_oracle(self):
        """Pairwise matrices match the scalar oracle."""
        rng = np.random.Generator(np.random.PCG64(4))
        a, b = rng.normal(size=(7, 5)), rng.normal(size=(9, 5))
        for metric in (Metric.EUCLIDEAN, Metric.COSINE):
            matrix = pairwise_distances(a, b, metric)
            for i in range(7):
                for j in range(9):
                    assert matrix[i, j] == pytest.approx(oracle_distance(a[i], b[j], metric), abs=1e-12)


class TestKnnAll:
    """Test all-points kNN with self-exclusion."""

    @pytest.mark.parametrize('metric', [Metric.EUCLIDEAN, Metric.COSINE])
    def test_matches_oracle_on_random_instances(self, metric):
        """100 random instances with N <= 64 agree with the brute-force oracle."""
        rng = np.random.Generator(np.random.PCG64(123))
        for _ in range(100):
            n = int(rng.integers(5, 65))
            d = int(rng.integers(2, 6))
            k = int(rng.integers(1, min(n - 1, 10) + 1))
            features = rng.normal(size=(n, d))
            data = Dataset.from_arrays(features, np.arange(n) % 2)
            neighbors = knn_all(data, k, metric)
            expected = oracle_knn(features, k, metric)
            for i in range(n):
                expected_distances = [dist for dist, _ in expected[i]]
                assert np.allclose(neighbors.distances[i], expected_distances, atol=1e-12, rtol=0)
                assert list(neighbors.indices[i]) == [j for _, j in expected[i]]

    def test_exact_ties_break_by_index(self):
        """Equal integer distances keep ascending reference index."""
        features = np.array([[0, 0], [1, 0], [-1, 0], [0, 1], [0, -1], [5, 5]], dtype=float)
        data = Dataset.from_arrays(features, [0, 0, 0, 1, 1, 1])
        neighbors = knn_all(data, 4, Metric.EUCLIDEAN)
        assert list(neighbors.indices[0]) == [1, 2, 3, 4]
        assert list(neighbors.distances[0]) == [1.0, 1.0, 1.0, 1.0]

    def test_never_contains_self(self):
        """Duplicate points are neighbors of each other, never of themselves."""
        features = np.array([[1, 1], [1, 1], [1, 1], [4, 4]], dtype=float)
        neighbors = knn_all(Dataset.from_arrays(features, [0, 0, 1, 1]), 2, Metric.EUCLIDEAN)
        for i in range(4):
            assert i not in neighbors.indices[i]
        assert list(neighbors.indices[0]) == [1, 2]
        assert list(neighbors.distances[0]) == [0.0, 0.0]

    def test_too_few_rows(self):
        """N <= k is a data error naming k + 1."""
        data = Dataset.from_arrays(np.zeros((5, 2)), [0, 0, 0, 1, 1])
        with pytest.raises(DataError, match="need at least k\\+1 = 6 rows"):
            knn_all(data, 5, Metric.EUCLIDEAN)

    def test_auto_resolves_by_dimension(self, mocker):
        """Auto passes the resolved metric down to the query."""
        spy = mocker.spy(geometry, "knn_query")
        data = Dataset.from_arrays(np.eye(3), [0, 0, 1])
        knn_all(data, 1, Metric.AUTO)
        assert spy.call_args[0][3] == Metric.EUCLIDEAN


class TestKnnQuery:
    """Test query-versus-reference search."""

    def test_exclude_minus_one_means_none(self):
        """-1 entries exclude nothing."""
        reference = np.array([[0.0], [1.0], [2.0]])
        neighbors = knn_query(np.array([[0.0], [0.0]]), reference, 1, Metric.EUCLIDEAN,
                              exclude=np.array([0, -1]))
        assert list(neighbors.indices[:, 0]) == [1, 0]

    def test_chunking_does_not_change_results(self, mocker):
        """Tiny chunks give the same neighbors as one block."""
        rng = np.random.Generator(np.random.PCG64(8))
        queries, reference = rng.normal(size=(40, 3)), rng.normal(size=(50, 3))
        whole = knn_query(queries, reference, 5, Metric.EUCLIDEAN)
        mocker.patch('manifold_rectify.utils.geometry._CHUNK_ELEMENTS', 1)
        chunked = knn_query(queries, reference, 5, Metric.EUCLIDEAN)
        assert np.array_equal(whole.indices, chunked.indices)
        assert np.array_equal(whole.distances, chunked.distances)


class TestRelativeContrast:
    """Test the distance-concentration diagnostic."""

    def test_simple_line(self):
        """Points 0, 1, 3 on a line: (3 - 1) / 1 = 2."""
        assert relative_contrast(np.array([[0.0], [1.0], [3.0]]), Metric.EUCLIDEAN) == 2.0

    def test_coincident_rows(self):
        """A zero pair distance makes the contrast infinite."""
        assert relative_contrast(np.array([[1.0], [1.0], [2.0]]), Metric.EUCLIDEAN) == float('inf')

    def test_contrast_shrinks_with_dimension(self):
        """Random data concentrates as the dimension grows."""
        rng = np.random.Generator(np.random.PCG64(1))
        low = relative_contrast(rng.random((100, 2)), Metric.EUCLIDEAN)
        high = relative_contrast(rng.random((100, 500)), Metric.EUCLIDEAN)
        assert high < low
