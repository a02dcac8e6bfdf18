#!/usr/bin/env python3
"""
Desk-scale Benchmark Harness

Runs every (dataset, seed, sampler) cell of the resampling protocol:
stratified split, sampler applied to the TRAIN part only, built-in kNN
classifier scored on the untouched test part, AUPRC per cell. Results are
aggregated into per-sampler mean/std and average ranks.

This module provides:
- run_benchmark: the cell loop with a row_id isolation audit
- EvalResult: JSON payload, CSV rank table and Markdown report
- synthetic_suite: seeded heavy-overlap datasets for desk-scale runs
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from manifold_rectify.utils.baselines import SamplerId, apply_sampler
from manifold_rectify.utils.cleaner import CleaningConfig
from manifold_rectify.utils.config import ConfigError
from manifold_rectify.utils.data import DataError, Dataset, SplitSpec, SyntheticSpec, generate_overlap, stratified_split
from manifold_rectify.utils.evaluation import auprc, knn_classifier_scores
from manifold_rectify.utils.report import render_active_config, render_glossary, status

DatasetEntry = Union[Dataset, Tuple[str, Dataset]]

GLOSSARY = {
    'AUPRC': 'Average precision of the minority scores on the test split; tied scores are processed as one group.',
    'Average rank': 'Mean over (dataset, seed) cells of the sampler\'s rank by AUPRC (1 = best, ties share the average rank).',
    'Failed cell': 'A sampler or classifier error on one (dataset, seed); recorded as null and left out of that cell\'s ranking.',
    'Imbalance ratio': 'Majority count divided by minority count.',
}


@dataclass
class BenchmarkCell:
    dataset: str
    seed: int
    sampler: str
    auprc: Optional[float] = None
    rank: Optional[float] = None
    n_train: int = 0
    n_train_after: Optional[int] = None
    error: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'dataset': self.dataset,
            'seed': self.seed,
            'sampler': self.sampler,
            'auprc': self.auprc,
            'rank': self.rank,
            'n_train': self.n_train,
            'n_train_after': self.n_train_after,
            'error': self.error,
        }


@dataclass
class EvalResult:
    """Every benchmark cell plus per-sampler aggregates."""
    datasets: List[str]
    samplers: List[str]
    seeds: List[int]
    cells: List[BenchmarkCell] = field(default_factory=list)

    def _frame(self) -> pd.DataFrame:
        return pd.DataFrame([cell.to_dict() for cell in self.cells],
                            columns=['dataset', 'seed', 'sampler', 'auprc', 'rank', 'n_train', 'n_train_after', 'error'])

    @property
    def failures(self) -> List[BenchmarkCell]:
        return [cell for cell in self.cells if cell.error is not None]

    def summary(self) -> Dict[str, Dict[str, Optional[float]]]:
        """Per sampler: population mean/std of AUPRC, average rank, and completed cell count."""
        frame = self._frame()
        result: Dict[str, Dict[str, Optional[float]]] = {}
        for sampler in self.samplers:
            rows = frame[(frame['sampler'] == sampler) & frame['auprc'].notna()]
            values = rows['auprc'].to_numpy(dtype=np.float64)
            result[sampler] = {
                'mean': float(np.mean(values)) if values.size else None,
                'std': float(np.std(values)) if values.size else None,
                'avg_rank': float(rows['rank'].astype(float).mean()) if values.size else None,
                'n_cells': int(values.size),
            }
        return result

    def per_dataset_mean(self) -> Dict[str, Dict[str, Optional[float]]]:
        """Seed-averaged AUPRC per dataset and sampler."""
        frame = self._frame()
        table: Dict[str, Dict[str, Optional[float]]] = {}
        for dataset in self.datasets:
            table[dataset] = {}
            for sampler in self.samplers:
                values = frame[(frame['dataset'] == dataset) & (frame['sampler'] == sampler)]['auprc'].dropna()
                table[dataset][sampler] = float(values.astype(float).mean()) if len(values) else None
        return table

    def to_dict(self) -> Dict[str, Any]:
        return {
            'datasets': list(self.datasets),
            'samplers': list(self.samplers),
            'seeds': list(self.seeds),
            'summary': self.summary(),
            'per_dataset_mean': self.per_dataset_mean(),
            'cells': [cell.to_dict() for cell in self.cells],
            'failures': [cell.to_dict() for cell in self.failures],
        }

    def rank_table_frame(self) -> pd.DataFrame:
        """Methods x (mean_auprc, std_auprc, avg_rank, n_cells), sorted by average rank."""
        summary = self.summary()
        frame = pd.DataFrame([
            {
                'method': sampler,
                'mean_auprc': stats['mean'],
                'std_auprc': stats['std'],
                'avg_rank': stats['avg_rank'],
                'n_cells': stats['n_cells'],
            }
            for sampler, stats in summary.items()
        ], columns=['method', 'mean_auprc', 'std_auprc', 'avg_rank', 'n_cells'])
        return frame.sort_values(['avg_rank', 'method'], kind='mergesort', na_position='last').reset_index(drop=True)

    def write_rank_csv(self, path: str) -> str:
        self.rank_table_frame().to_csv(path, index=False, lineterminator='\n')
        return path

    def render_markdown(self, config: Optional[Dict[str, Any]] = None) -> str:
        """Full Markdown benchmark report."""
        sections = [
            self._generate_header(),
            self._generate_rank_table(),
            self._generate_dataset_table(),
            self._generate_failures_section(),
            render_glossary(GLOSSARY),
        ]
        if config:
            sections.append(render_active_config(config))
        return "\n".join(section for section in sections if section)

    def _generate_header(self) -> str:
        seeds = ", ".join(str(seed) for seed in self.seeds)
        return "\n".join([
            "# 📊 Resampling Benchmark Report",
            "",
            f"**Datasets:** {len(self.datasets)}  ",
            f"**Samplers:** {', '.join(self.samplers)}  ",
            f"**Seeds:** {seeds}",
            "",
        ])

    def _generate_rank_table(self) -> str:
        lines = [
            "## 🏆 Rank Table",
            "",
            "| Method | Mean AUPRC | Std | Avg Rank | Cells |",
            "|---|---|---|---|---|",
        ]
        for row in self.rank_table_frame().itertuples(index=False):
            lines.append(
                f"| {row.method} | {format_value(row.mean_auprc)} | {format_value(row.std_auprc)} | {format_value(row.avg_rank, 2)} | {row.n_cells} |"
            )
        lines.append("")
        return "\n".join(lines)

    def _generate_dataset_table(self) -> str:
        per_dataset = self.per_dataset_mean()
        lines = [
            "## 📈 Mean AUPRC per Dataset",
            "",
            "| Dataset | " + " | ".join(self.samplers) + " |",
            "|---|" + "---|" * len(self.samplers),
        ]
        for dataset in self.datasets:
            values = [format_value(per_dataset[dataset][sampler]) for sampler in self.samplers]
            lines.append(f"| {dataset} | " + " | ".join(values) + " |")
        lines.append("")
        return "\n".join(lines)

    def _generate_failures_section(self) -> str:
        if not self.failures:
            return ""
        lines = ["## ⚠️ Failed Cells", ""]
        for cell in self.failures:
            lines.append(f"- **{cell.sampler}** on {cell.dataset} (seed {cell.seed}): {cell.error}")
        lines.append("")
        return "\n".join(lines)


def format_value(value: Optional[float], digits: int = 4) -> str:
    if value is None or (isinstance(value, float) and np.isnan(value)):
        return "n/a"
    return f"{value:.{digits}f}"


def sampler_labels(samplers: Sequence[Any]) -> List[str]:
    """Unique column labels; repeats get '#2', '#3', ..."""
    labels: List[str] = []
    seen: Dict[str, int] = {}
    for sampler in samplers:
        name = SamplerId.parse(sampler).value
        seen[name] = seen.get(name, 0) + 1
        labels.append(name if seen[name] == 1 else f"{name}#{seen[name]}")
    return labels


def _named(datasets: Sequence[DatasetEntry]) -> List[Tuple[str, Dataset]]:
    named = []
    for i, entry in enumerate(datasets):
        if isinstance(entry, Dataset):
            named.append((f"dataset_{i}", entry))
        else:
            named.append((str(entry[0]), entry[1]))
    return named


def audit_isolation(train: Dataset, test: Dataset, resampled: Dataset) -> None:
    """
    Check the sampler output only holds TRAIN rows.

    Raises:
        DataError: If any resampled row_id is absent from train or present in test
    """
    train_ids = set(int(r) for r in train.row_ids)
    test_ids = set(int(r) for r in test.row_ids)
    output_ids = set(int(r) for r in resampled.row_ids)
    if not output_ids <= train_ids:
        raise DataError(f"sampler produced {len(output_ids - train_ids)} row(s) not in the training split")
    if output_ids & test_ids:
        raise DataError(f"sampler output contains {len(output_ids & test_ids)} test row(s)")


def _assign_ranks(cells: List[BenchmarkCell]) -> None:
    frame = pd.DataFrame([{'i': i, 'dataset': c.dataset, 'seed': c.seed, 'auprc': c.auprc}
                          for i, c in enumerate(cells) if c.auprc is not None])
    if frame.empty:
        return
    frame['rank'] = frame.groupby(['dataset', 'seed'])['auprc'].rank(ascending=False, method='average')
    for i, rank in zip(frame['i'], frame['rank']):
        cells[int(i)].rank = float(rank)


def run_benchmark(
    datasets: Sequence[DatasetEntry],
    samplers: Sequence[Any],
    seeds: Sequence[int],
    config: Optional[CleaningConfig] = None,
    classifier_k: int = 15,
    test_fraction: float = 0.2,
    enn_k: int = 3,
) -> EvalResult:
    """
    Run the benchmark protocol over datasets x seeds x samplers.

    Args:
        datasets: Datasets, optionally as (name, Dataset) pairs
        samplers: Sampler ids (strings or SamplerId); repeats are allowed
        seeds: Split seeds (also the RUS seed)
        config: GMR hyperparameters
        classifier_k: Neighbors for the built-in classifier
        test_fraction: Stratified test share
        enn_k: ENN neighborhood size

    Returns:
        EvalResult with one cell per (dataset, seed, sampler)

    Raises:
        DataError: Empty dataset/sampler/seed list or an unsplittable dataset
        ConfigError: Invalid CleaningConfig
    """
    if not datasets or not samplers or not seeds:
        raise DataError("datasets, samplers and seeds must all be non-empty")
    config = (config or CleaningConfig()).validate()
    named = _named(datasets)
    labels = sampler_labels(samplers)
    ids = [SamplerId.parse(s) for s in samplers]
    result = EvalResult(datasets=[name for name, _ in named], samplers=labels, seeds=[int(s) for s in seeds])

    status(f"📊 Benchmark: {len(named)} dataset(s) x {len(seeds)} seed(s) x {len(labels)} sampler(s)")
    for name, data in named:
        for seed in seeds:
            train, test = stratified_split(data, SplitSpec(test_fraction=test_fraction, seed=int(seed)))
            for label, sampler in zip(labels, ids):
                cell = BenchmarkCell(dataset=name, seed=int(seed), sampler=label, n_train=train.n_samples)
                try:
                    resampled, _ = apply_sampler(sampler, train, config, seed=int(seed), enn_k=enn_k)
                    audit_isolation(train, test, resampled)
                    cell.n_train_after = resampled.n_samples
                    scores = knn_classifier_scores(resampled, test, classifier_k, config.metric,
                                                   config.epsilon, config.metric_threshold)
                    cell.auprc = auprc(scores, test.labels)
                except (DataError, ConfigError, ValueError) as e:
                    cell.error = str(e)
                    status(f"⚠️  {label} failed on {name} (seed {seed}): {e}")
                result.cells.append(cell)
        status(f"✅ {name} done")

    _assign_ranks(result.cells)
    return result


def synthetic_suite(
    n_datasets: int = 10,
    n_majority: int = 400,
    n_minority: int = 40,
    dim: int = 2,
    separation: float = 1.0,
    std: float = 1.0,
    base_seed: int = 100,
) -> List[Tuple[str, Dataset]]:
    """Seeded two-Gaussian overlap datasets named synthetic_00, synthetic_01, ..."""
    if n_datasets < 1:
        raise DataError(f"n_datasets must be at least 1, got {n_datasets}")
    suite = []
    for i in range(n_datasets):
        spec = SyntheticSpec.separated(n_majority, n_minority, dim=dim, separation=separation,
                                       std=std, seed=base_seed + i)
        suite.append((f"synthetic_{i:02d}", generate_overlap(spec)))
    return suite
