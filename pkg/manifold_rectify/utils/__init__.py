"""
Utils package for manifold-rectify

Modules:
    data: Dataset type, CSV ingestion/export, stratified split, synthetic data
    geometry: metrics, adaptive metric selection, exact kNN search
    confidence: inverse-distance weighted confidence tables
    cleaner: asymmetric GMR cleaning
    baselines: ENN, Tomek links, random undersampling
    evaluation: kNN scorer, AUPRC, asymmetric risk, cleaned posterior
    config: YAML configuration loading and validation
    report: status output, JSON/manifest writing, Markdown sections

Usage:
    from manifold_rectify.utils.data import load_csv
    from manifold_rectify.utils.cleaner import CleaningConfig, clean
"""

from .data import DataError, Dataset, load_csv, export_csv, stratified_split, generate_overlap
from .cleaner import CleaningConfig, clean
from .config import ConfigError, get_config
from .report import status, write_json

__all__ = [
    'DataError',
    'Dataset',
    'load_csv',
    'export_csv',
    'stratified_split',
    'generate_overlap',
    'CleaningConfig',
    'clean',
    'ConfigError',
    'get_config',
    'status',
    'write_json',
]
