"""
manifold-rectify - geometric confidence cleaning for imbalanced classification

Distance-weighted kNN confidence estimation, asymmetric majority/minority
cleaning, reference undersamplers, a desk-scale benchmark harness and
experiments that check the method's posterior-shift and variance claims.
"""

__version__ = "1.0.0"

# Public API
from manifold_rectify.utils.data import DataError, Dataset, SplitSpec, SyntheticSpec, load_csv
from manifold_rectify.utils.geometry import Metric, knn_all, select_metric
from manifold_rectify.utils.confidence import ConfidenceTable, estimate, uniform_estimate
from manifold_rectify.utils.cleaner import CleaningConfig, CleaningReport, clean
from manifold_rectify.utils.config import ConfigError
from manifold_rectify.reports.benchmark import EvalResult, run_benchmark

__all__ = [
    'DataError',
    'Dataset',
    'SplitSpec',
    'SyntheticSpec',
    'load_csv',
    'Metric',
    'knn_all',
    'select_metric',
    'ConfidenceTable',
    'estimate',
    'uniform_estimate',
    'CleaningConfig',
    'CleaningReport',
    'clean',
    'ConfigError',
    'EvalResult',
    'run_benchmark',
    '__version__',
]
