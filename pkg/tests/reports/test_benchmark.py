#!/usr/bin/env python3
"""
Tests for the benchmark harness.

The ten-dataset suite run is marked ``slow``.
"""

import numpy as np
import pandas as pd
import pytest

from manifold_rectify.reports import benchmark
from manifold_rectify.reports.benchmark import (
    BenchmarkCell,
    EvalResult,
    audit_isolation,
    run_benchmark,
    sampler_labels,
    synthetic_suite,
)
from manifold_rectify.utils.data import DataError, Dataset, SplitSpec, SyntheticSpec, generate_overlap, stratified_split
from manifold_rectify.utils.report import dumps_json


@pytest.fixture
def overlap_data():
    """Heavy-overlap dataset, IR = 8."""
    return generate_overlap(SyntheticSpec.separated(160, 20, separation=1.5, seed=3))


class TestSamplerLabels:
    """Test column labels for repeated samplers."""

    def test_duplicates_numbered(self):
        assert sampler_labels(['GMR', 'none', 'gmr', 'GMR']) == ['GMR', 'None', 'GMR#2', 'GMR#3']

    def test_unknown_sampler(self):
        with pytest.raises(ValueError, match="unknown sampler"):
            sampler_labels(['SMOTE'])


class TestRunBenchmark:
    """Test the cell loop and rank aggregation."""

    def test_single_sampler_ranks_one(self, overlap_data):
        """With one sampler every completed cell ranks 1."""
        result = run_benchmark([('d', overlap_data)], ['None'], [0, 1], classifier_k=5)
        assert len(result.cells) == 2
        assert all(cell.rank == 1.0 for cell in result.cells)
        assert result.summary()['None']['avg_rank'] == 1.0

    def test_duplicate_sampler_ties(self, overlap_data):
        """A repeated deterministic sampler gets identical AUPRC and the averaged rank."""
        result = run_benchmark([('d', overlap_data)], ['GMR', 'GMR', 'None'], [42], classifier_k=5)
        by_label = {cell.sampler: cell for cell in result.cells}
        assert by_label['GMR'].auprc == by_label['GMR#2'].auprc
        assert by_label['GMR'].rank == by_label['GMR#2'].rank
        assert by_label['GMR'].rank in (1.5, 2.0, 2.5)

    def test_ranks_sum_per_cell(self, overlap_data):
        """Ranks within each (dataset, seed) sum to s(s+1)/2."""
        samplers = ['None', 'GMR', 'ENN', 'Tomek', 'RUS']
        result = run_benchmark([('a', overlap_data), overlap_data], samplers, [42, 0], classifier_k=5)
        assert result.datasets == ['a', 'dataset_1']
        frame = pd.DataFrame([cell.to_dict() for cell in result.cells])
        sums = frame.groupby(['dataset', 'seed'])['rank'].sum()
        assert np.allclose(sums.to_numpy(), 15.0)
        for stats in result.summary().values():
            assert 0.0 <= stats['mean'] <= 1.0
            assert stats['n_cells'] == 4

    def test_samplers_see_train_only(self, overlap_data, mocker):
        """apply_sampler is called with exactly the training split of each seed."""
        spy = mocker.spy(benchmark, 'apply_sampler')
        run_benchmark([('d', overlap_data)], ['GMR', 'RUS'], [42, 7], classifier_k=5)
        assert spy.call_count == 4
        expected = {}
        for seed in (42, 7):
            train, test = stratified_split(overlap_data, SplitSpec(test_fraction=0.2, seed=seed))
            expected[seed] = (set(train.row_ids), set(test.row_ids))
        for call in spy.call_args_list:
            seen = set(call.args[1].row_ids)
            train_ids, test_ids = expected[call.kwargs['seed']]
            assert seen == train_ids
            assert not seen & test_ids

    def test_failed_cell_recorded(self):
        """RUS leaves fewer rows than classifier_k: null cell, others still ranked."""
        data = generate_overlap(SyntheticSpec.separated(100, 10, separation=1.0, seed=1))
        result = run_benchmark([('small', data)], ['None', 'RUS'], [42], classifier_k=20)
        by_label = {cell.sampler: cell for cell in result.cells}
        assert by_label['RUS'].auprc is None
        assert by_label['RUS'].rank is None
        assert 'smaller than k=20' in by_label['RUS'].error
        assert by_label['None'].rank == 1.0
        assert [cell.sampler for cell in result.failures] == ['RUS']
        assert result.summary()['RUS'] == {'mean': None, 'std': None, 'avg_rank': None, 'n_cells': 0}

    def test_deterministic(self, overlap_data):
        """Two runs serialize byte-identically."""
        args = ([('d', overlap_data)], ['None', 'GMR', 'RUS'], [42, 0])
        assert dumps_json(run_benchmark(*args, classifier_k=5).to_dict()) == \
            dumps_json(run_benchmark(*args, classifier_k=5).to_dict())

    def test_empty_inputs(self, overlap_data):
        with pytest.raises(DataError, match="non-empty"):
            run_benchmark([('d', overlap_data)], [], [42])


class TestAuditIsolation:
    """Test the row_id audit."""

    def test_test_row_in_output(self):
        data = Dataset.from_arrays(np.arange(10, dtype=float).reshape(-1, 1), [0] * 7 + [1] * 3)
        train, test = data.take(np.arange(8)), data.take(np.array([8, 9]))
        with pytest.raises(DataError, match="not in the training split"):
            audit_isolation(train, test, data)

    def test_subset_passes(self):
        data = Dataset.from_arrays(np.arange(10, dtype=float).reshape(-1, 1), [0] * 7 + [1] * 3)
        train, test = data.take(np.arange(8)), data.take(np.array([8, 9]))
        audit_isolation(train, test, train.take(np.array([0, 2, 7])))


class TestEvalResultOutputs:
    """Test rank table, CSV and Markdown rendering."""

    @pytest.fixture
    def result(self):
        cells = [
            BenchmarkCell('d', 42, 'None', auprc=0.4, rank=2.0, n_train=80, n_train_after=80),
            BenchmarkCell('d', 42, 'GMR', auprc=0.6, rank=1.0, n_train=80, n_train_after=70),
            BenchmarkCell('d', 0, 'None', auprc=0.5, rank=1.5, n_train=80, n_train_after=80),
            BenchmarkCell('d', 0, 'GMR', auprc=0.5, rank=1.5, n_train=80, n_train_after=72),
        ]
        return EvalResult(datasets=['d'], samplers=['None', 'GMR'], seeds=[42, 0], cells=cells)

    def test_summary(self, result):
        summary = result.summary()
        assert summary['GMR']['mean'] == pytest.approx(0.55)
        assert summary['GMR']['std'] == pytest.approx(0.05)
        assert summary['GMR']['avg_rank'] == pytest.approx(1.25)
        assert result.per_dataset_mean()['d']['None'] == pytest.approx(0.45)

    def test_rank_table_sorted(self, result):
        """Best average rank first."""
        assert list(result.rank_table_frame()['method']) == ['GMR', 'None']

    def test_rank_csv(self, result, tmp_path):
        path = result.write_rank_csv(str(tmp_path / 'ranks.csv'))
        frame = pd.read_csv(path)
        assert list(frame.columns) == ['method', 'mean_auprc', 'std_auprc', 'avg_rank', 'n_cells']
        assert frame['method'].tolist() == ['GMR', 'None']

    def test_markdown(self, result):
        """Header, rank table and glossary; config block only when enabled."""
        markdown = result.render_markdown()
        assert markdown.startswith("# 📊 Resampling Benchmark Report")
        assert "| GMR | 0.5500 | 0.0500 | 1.25 | 2 |" in markdown
        assert "## 📚 Glossary" in markdown
        assert "Failed Cells" not in markdown
        assert "Active Configuration" in result.render_markdown({'report': {'show_active_config': True}})

    def test_markdown_lists_failures(self, result):
        result.cells.append(BenchmarkCell('d', 42, 'RUS', n_train=80, error='boom'))
        assert "- **RUS** on d (seed 42): boom" in result.render_markdown()


class TestSyntheticSuite:
    """Test suite generation."""

    def test_names_and_sizes(self):
        suite = synthetic_suite(n_datasets=3, n_majority=50, n_minority=10)
        assert [name for name, _ in suite] == ['synthetic_00', 'synthetic_01', 'synthetic_02']
        assert all(data.n_majority == 50 and data.n_minority == 10 for _, data in suite)
        assert not np.array_equal(suite[0][1].features, suite[1][1].features)

    def test_at_least_one(self):
        with pytest.raises(DataError):
            synthetic_suite(n_datasets=0)

    @pytest.mark.slow
    def test_desk_scale_suite(self):
        """GMR matches or beats no resampling on most datasets and outranks RUS."""
        result = run_benchmark(synthetic_suite(), ['None', 'GMR', 'ENN', 'Tomek', 'RUS'], [42, 0, 1, 2, 3])
        per_dataset = result.per_dataset_mean()
        wins = sum(1 for name in result.datasets if per_dataset[name]['GMR'] >= per_dataset[name]['None'])
        assert wins >= 7
        summary = result.summary()
        assert summary['GMR']['avg_rank'] < summary['RUS']['avg_rank']
