#!/usr/bin/env python3
"""
Command-line interface for manifold-rectify using Click.

Every command writes machine-readable output (CSV/JSON with an embedded
run manifest) and prints exactly one summary line to standard output.
Status lines go to standard error.

Exit codes: 0 ok, 1 data error, 2 usage or configuration error.
"""

import copy
import functools
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import click
import numpy as np

# Ensure dotenv is loaded before configuration is read
from dotenv import load_dotenv
load_dotenv()

from manifold_rectify import __version__
from manifold_rectify.reports.benchmark import format_value, run_benchmark, synthetic_suite
from manifold_rectify.reports.theory import NoiseModel, posterior_shift_experiment, variance_reduction_experiment
from manifold_rectify.utils.baselines import SamplerId
from manifold_rectify.utils.cleaner import CleaningConfig, clean
from manifold_rectify.utils.config import ConfigError, apply_overrides, build_cleaning_config, get_config, get_config_value
from manifold_rectify.utils.confidence import estimate, uniform_estimate
from manifold_rectify.utils.data import DataError, Dataset, SyntheticSpec, export_csv, generate_overlap, load_csv
from manifold_rectify.utils.evaluation import PosteriorShiftInput, cleaned_posterior, uncleaned_posterior
from manifold_rectify.utils.geometry import knn_all, relative_contrast, select_metric
from manifold_rectify.utils.report import (
    build_manifest,
    file_digest,
    generate_filename,
    resolve_output_path,
    save_report,
    status,
    write_json,
)

# pairwise contrast is quadratic in rows; larger inputs use a seeded subset
CONTRAST_MAX_ROWS = 2000


def handle_errors(func):
    """Map ConfigError to a usage error (exit 2) and data/IO errors to exit 1."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except ConfigError as e:
            raise click.UsageError(str(e))
        except (DataError, OSError) as e:
            click.echo(click.style(f"❌ Error: {e}", fg='red'), err=True)
            sys.exit(1)
    return wrapper


def config_options(func):
    func = click.option('--stamp-time', is_flag=True, help='Record wall-clock time in the run manifest')(func)
    func = click.option('--config', 'config_paths', multiple=True,
                        help='User YAML config merged over the defaults (repeatable)')(func)
    return func


def gmr_options(func):
    """Cleaning hyperparameter flags; unset flags fall back to config, then defaults."""
    options = [
        click.option('--k', type=int, default=None, help='Neighborhood size (default: 15)'),
        click.option('--alpha', type=float, default=None, help='Majority confidence threshold (default: 0.3)'),
        click.option('--beta', type=float, default=None, help='Minority majority-confidence threshold, must be >= alpha (default: 0.7)'),
        click.option('--gamma', type=float, default=None, help='Minority removal cap as a fraction of |D_min| (default: 0.1)'),
        click.option('--epsilon', type=float, default=None, help='Inverse-distance stabilizer (default: 1e-8)'),
        click.option('--metric', type=click.Choice(['auto', 'euclidean', 'cosine'], case_sensitive=False),
                     default=None, help='Distance metric (default: auto)'),
        click.option('--metric-threshold', type=int, default=None,
                     help='Auto uses cosine above this feature dimension (default: 100)'),
        click.option('--scarcity-floor', type=int, default=None,
                     help='Skip cleaning when |D_min| is below this (default: 10)'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _gmr_overrides(params: Dict[str, Any]) -> Dict[str, Any]:
    keys = ('k', 'alpha', 'beta', 'gamma', 'epsilon', 'metric', 'metric_threshold', 'scarcity_floor')
    return {f'gmr.{key}': params.get(key) for key in keys}


def _resolve(config_paths: Tuple[str, ...], overrides: Dict[str, Any]) -> Dict[str, Any]:
    return apply_overrides(get_config(list(config_paths)), overrides)


def _manifest_config(config: Dict[str, Any], cleaning: Optional[CleaningConfig]) -> Dict[str, Any]:
    resolved = copy.deepcopy(config)
    if cleaning is not None:
        resolved['gmr'] = cleaning.to_dict()
    return resolved


def _reports_dir(config: Dict[str, Any]) -> str:
    return get_config_value(config, 'report.reports_dir', 'Reports')


def _int_list(ctx, param, value: Optional[str]) -> Optional[List[int]]:
    if value is None:
        return None
    try:
        values = [int(item) for item in value.split(',') if item.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {value!r}")
    if not values or any(v < 0 for v in values):
        raise click.BadParameter(f"expected non-empty unsigned integers, got {value!r}")
    return values


def _sampler_list(ctx, param, value: Optional[str]) -> Optional[List[str]]:
    if value is None:
        return None
    try:
        return [SamplerId.parse(item).value for item in value.split(',') if item.strip()]
    except ValueError as e:
        raise click.BadParameter(str(e))


def _path_list(ctx, param, value: Tuple[str, ...]) -> Tuple[str, ...]:
    # --inputs a.csv,b.csv is the same as --inputs a.csv --inputs b.csv
    return tuple(item.strip() for raw in value for item in raw.split(',') if item.strip())


def _stem(path: str) -> str:
    return Path(path).stem


@click.group()
@click.version_option(version=__version__, prog_name='manifold-rectify')
def cli():
    """manifold-rectify - geometric confidence cleaning for imbalanced data.

    Clean a labelled CSV, inspect per-row confidence, benchmark samplers,
    and run the posterior-shift and variance-reduction experiments.
    """
    pass


@cli.command('clean')
@click.option('--input', 'input_path', required=True, help='Input CSV with a header row')
@click.option('--label-col', required=True, help='Name of the label column')
@click.option('--minority-label', default=None, help='Raw label value of the minority class (default: less frequent)')
@gmr_options
@click.option('--out', default=None, help='Cleaned CSV path (default: <reports_dir>/cleaned_<input>.csv)')
@click.option('--report', 'report_path', default=None,
              help='Cleaning report JSON path (default: <reports_dir>/cleaning_report_<input>.json)')
@config_options
@handle_errors
def clean_cmd(input_path: str, label_col: str, minority_label: Optional[str], out: Optional[str],
              report_path: Optional[str], config_paths: Tuple[str, ...], stamp_time: bool, **gmr):
    """Remove boundary-corrupting rows with asymmetric GMR cleaning.

    Examples:
        manifold-rectify clean --input data.csv --label-col label
        manifold-rectify clean --input data.csv --label-col y --k 10 --beta 0.8
    """
    config = _resolve(config_paths, _gmr_overrides(gmr))
    cleaning = build_cleaning_config(config)
    data = load_csv(input_path, label_col, minority_label)
    status(f"✅ Loaded {data.n_samples} rows ({data.n_majority} majority, {data.n_minority} minority)")

    cleaned, report = clean(data, cleaning)
    if report.skipped_scarcity:
        status(f"⚠️  |D_min|={data.n_minority} is below the scarcity floor {cleaning.scarcity_floor}; nothing removed")

    reports_dir = _reports_dir(config)
    csv_path = resolve_output_path(out, reports_dir, generate_filename('cleaned', _stem(input_path), 'csv'))
    export_csv(cleaned, csv_path)
    json_path = resolve_output_path(report_path, reports_dir,
                                    generate_filename('cleaning_report', _stem(input_path)))
    manifest = build_manifest('clean', _manifest_config(config, cleaning), inputs=[input_path],
                              resolved_metric=report.resolved_metric, stamp_time=stamp_time)
    write_json({'manifest': manifest.to_dict(), 'report': report.to_dict()}, json_path)
    status(f"📄 Cleaned data saved to: {csv_path}")
    status(f"📄 Report saved to: {json_path}")

    click.echo(report.summary_line())


@cli.command('confidence')
@click.option('--input', 'input_path', required=True, help='Input CSV with a header row')
@click.option('--label-col', required=True, help='Name of the label column')
@click.option('--minority-label', default=None, help='Raw label value of the minority class (default: less frequent)')
@gmr_options
@click.option('--uniform', is_flag=True, help='Use equal 1/k weights instead of inverse-distance weights')
@click.option('--out', default=None, help='Confidence table CSV path (default: <reports_dir>/confidence_<input>.csv)')
@click.option('--report', 'report_path', default=None,
              help='Summary JSON path (default: <reports_dir>/confidence_<input>.json)')
@config_options
@handle_errors
def confidence_cmd(input_path: str, label_col: str, minority_label: Optional[str], uniform: bool,
                   out: Optional[str], report_path: Optional[str], config_paths: Tuple[str, ...],
                   stamp_time: bool, **gmr):
    """Write the per-row geometric confidence table.

    Examples:
        manifold-rectify confidence --input data.csv --label-col label
        manifold-rectify confidence --input data.csv --label-col label --uniform
    """
    config = _resolve(config_paths, _gmr_overrides(gmr))
    cleaning = build_cleaning_config(config)
    data = load_csv(input_path, label_col, minority_label)
    data.require_both_classes()

    resolved = select_metric(cleaning.metric, data.n_features, cleaning.metric_threshold)
    neighbors = knn_all(data, cleaning.k, resolved, cleaning.metric_threshold)
    table = uniform_estimate(data, neighbors) if uniform else estimate(data, neighbors, cleaning.epsilon)

    if data.n_samples > CONTRAST_MAX_ROWS:
        rng = np.random.Generator(np.random.PCG64(0))
        subset = np.sort(rng.choice(data.n_samples, size=CONTRAST_MAX_ROWS, replace=False))
        contrast = relative_contrast(data.features[subset], resolved, cleaning.metric_threshold)
        contrast_rows = CONTRAST_MAX_ROWS
    else:
        contrast = relative_contrast(data.features, resolved, cleaning.metric_threshold)
        contrast_rows = data.n_samples

    reports_dir = _reports_dir(config)
    csv_path = resolve_output_path(out, reports_dir, generate_filename('confidence', _stem(input_path), 'csv'))
    table.to_csv(csv_path)

    summary = {
        'n_rows': data.n_samples,
        'weighting': 'uniform' if uniform else 'inverse_distance',
        'resolved_metric': resolved.value,
        'predicted_minority': int(np.count_nonzero(table.predicted == 1)),
        'mean_self_conf': float(np.mean(table.self_conf)),
        'mean_self_conf_minority': float(np.mean(table.self_conf[data.labels == 1])),
        'relative_contrast': contrast,
        'relative_contrast_rows': contrast_rows,
    }
    json_path = resolve_output_path(report_path, reports_dir, generate_filename('confidence', _stem(input_path)))
    manifest = build_manifest('confidence', _manifest_config(config, cleaning), inputs=[input_path],
                              resolved_metric=resolved.value, stamp_time=stamp_time)
    write_json({'manifest': manifest.to_dict(), 'summary': summary}, json_path)
    status(f"📄 Confidence table saved to: {csv_path}")

    click.echo(
        f"rows={data.n_samples} metric={resolved.value} predicted_minority={summary['predicted_minority']} "
        f"mean_self_conf={summary['mean_self_conf']:.4f} relative_contrast={contrast:.4f}"
    )


@cli.command('bench')
@click.option('--inputs', 'inputs', multiple=True, callback=_path_list,
              help='Input CSVs: repeat the flag or pass a comma-separated list')
@click.option('--label-col', default=None, help='Label column shared by all --inputs')
@click.option('--minority-label', default=None, help='Raw minority label shared by all --inputs')
@click.option('--synthetic', type=int, default=None,
              help='Add N seeded synthetic overlap datasets (suite settings from config)')
@click.option('--samplers', callback=_sampler_list, default=None,
              help='Comma-separated samplers: None,GMR,ENN,Tomek,RUS (default: all five)')
@click.option('--seeds', callback=_int_list, default=None, help='Comma-separated split seeds (default: 42,0,1,2,3)')
@click.option('--classifier-k', type=int, default=None, help='Neighbors for the built-in kNN classifier (default: 15)')
@click.option('--enn-k', type=int, default=None, help='ENN neighborhood size (default: 3)')
@click.option('--test-fraction', type=float, default=None, help='Stratified test share (default: 0.2)')
@gmr_options
@click.option('--out', default=None, help='EvalResult JSON path (default: <reports_dir>/benchmark_<tag>.json)')
@click.option('--rank-csv', default=None, help='Rank table CSV path (default: <reports_dir>/rank_table_<tag>.csv)')
@click.option('--markdown', is_flag=True, help='Also save a Markdown report to the reports directory')
@config_options
@handle_errors
def bench_cmd(inputs: Tuple[str, ...], label_col: Optional[str], minority_label: Optional[str],
              synthetic: Optional[int], samplers: Optional[List[str]], seeds: Optional[List[int]],
              classifier_k: Optional[int], enn_k: Optional[int], test_fraction: Optional[float],
              out: Optional[str], rank_csv: Optional[str], markdown: bool,
              config_paths: Tuple[str, ...], stamp_time: bool, **gmr):
    """Benchmark samplers with seeded stratified splits and a kNN classifier.

    Examples:
        manifold-rectify bench --inputs a.csv --inputs b.csv --label-col label
        manifold-rectify bench --inputs a.csv,b.csv --label-col label
        manifold-rectify bench --synthetic 10 --seeds 42,0,1,2,3
    """
    if not inputs and not synthetic:
        raise click.UsageError("provide --inputs PATH (with --label-col) and/or --synthetic N")
    if inputs and not label_col:
        raise click.UsageError("--label-col is required with --inputs")
    if synthetic is not None and synthetic < 1:
        raise click.BadParameter("must be at least 1", param_hint='--synthetic')

    overrides = _gmr_overrides(gmr)
    overrides.update({
        'benchmark.samplers': samplers,
        'benchmark.seeds': seeds,
        'benchmark.classifier_k': classifier_k,
        'benchmark.enn_k': enn_k,
        'split.test_fraction': test_fraction,
        'benchmark.synthetic_suite.n_datasets': synthetic,
    })
    config = _resolve(config_paths, overrides)
    cleaning = build_cleaning_config(config)
    bench = config.get('benchmark', {})

    datasets: List[Tuple[str, Dataset]] = [(_stem(path), load_csv(path, label_col, minority_label)) for path in inputs]
    if synthetic:
        suite = dict(bench.get('synthetic_suite', {}))
        datasets.extend(synthetic_suite(**suite))

    result = run_benchmark(
        datasets,
        bench.get('samplers', [s.value for s in SamplerId]),
        bench.get('seeds', [42, 0, 1, 2, 3]),
        cleaning,
        classifier_k=bench.get('classifier_k', 15),
        test_fraction=get_config_value(config, 'split.test_fraction', 0.2),
        enn_k=bench.get('enn_k', 3),
    )

    tag = _stem(inputs[0]) if len(inputs) == 1 and not synthetic else 'suite'
    reports_dir = _reports_dir(config)
    json_path = resolve_output_path(out, reports_dir, generate_filename('benchmark', tag))
    csv_path = resolve_output_path(rank_csv, reports_dir, generate_filename('rank_table', tag, 'csv'))
    manifest = build_manifest('bench', _manifest_config(config, cleaning), inputs=inputs,
                              seeds=result.seeds, stamp_time=stamp_time)
    write_json({'manifest': manifest.to_dict(), 'result': result.to_dict()}, json_path)
    result.write_rank_csv(csv_path)
    status(f"📄 EvalResult saved to: {json_path}")
    status(f"📄 Rank table saved to: {csv_path}")
    if markdown:
        save_report(result.render_markdown(config), generate_filename('benchmark', tag, 'md'), reports_dir)

    best = result.rank_table_frame().iloc[0]
    click.echo(
        f"datasets={len(result.datasets)} seeds={len(result.seeds)} samplers={len(result.samplers)} "
        f"failures={len(result.failures)} best={best['method']} avg_rank={format_value(best['avg_rank'], 2)}"
    )


@cli.command('posterior')
@click.option('--ir', type=float, required=True, help='Imbalance ratio |D_maj| / |D_min|')
@click.option('--r0', type=float, required=True, help='Majority removal rate in [0, 1)')
@click.option('--r1', type=float, required=True, help='Minority removal rate in [0, 1)')
@click.option('--p0', type=float, default=None, help='Local majority posterior (use with --p1)')
@click.option('--p1', type=float, default=None, help='Local minority posterior (use with --p0)')
@click.option('--out', default=None, help='JSON path (default: <reports_dir>/posterior_shift_ir<IR>.json)')
@config_options
@handle_errors
def posterior_cmd(ir: float, r0: float, r1: float, p0: Optional[float], p1: Optional[float],
                  out: Optional[str], config_paths: Tuple[str, ...], stamp_time: bool):
    """Minority posterior after class-conditional removal.

    Examples:
        manifold-rectify posterior --ir 10 --r0 0.2 --r1 0.05
    """
    config = _resolve(config_paths, {})
    shift = PosteriorShiftInput(ir=ir, r0=r0, r1=r1, p0=p0, p1=p1)
    try:
        after = cleaned_posterior(shift)
        before = uncleaned_posterior(shift)
    except ValueError as e:
        raise click.UsageError(str(e))

    payload = {
        'input': {'ir': ir, 'r0': r0, 'r1': r1, 'p0': p0, 'p1': p1},
        'cleaned_posterior': after,
        'uncleaned_posterior': before,
        'shift': after - before,
    }
    json_path = resolve_output_path(out, _reports_dir(config), generate_filename('posterior_shift', f'ir{ir:g}'))
    manifest = build_manifest('posterior', config, stamp_time=stamp_time)
    write_json({'manifest': manifest.to_dict(), 'posterior': payload}, json_path)
    status(f"📄 Posterior saved to: {json_path}")

    click.echo(f"cleaned_posterior={after:.3f} uncleaned_posterior={before:.3f} shift={after - before:+.3f}")


@cli.command('variance')
@click.option('--k', type=int, default=None, help='Neighbors per trial (default: 15)')
@click.option('--trials', type=int, default=None, help='Simulated neighborhoods (default: 50000)')
@click.option('--sigma0-sq', type=float, default=None, help='Base noise variance (default: 0.05)')
@click.option('--lambda', 'lam', type=float, default=None, help='Noise growth with distance (default: 10.0)')
@click.option('--lipschitz', type=float, default=None, help='Posterior drift per unit distance (default: 0.0)')
@click.option('--posterior', type=float, default=None, help='True query posterior (default: 0.05)')
@click.option('--seed', type=click.IntRange(min=0), default=None, help='PCG64 seed (default: 0)')
@click.option('--epsilon', type=float, default=None, help='Inverse-distance stabilizer (default: 1e-8)')
@click.option('--out', default=None, help='JSON path (default: <reports_dir>/variance_k<K>.json)')
@config_options
@handle_errors
def variance_cmd(k: Optional[int], trials: Optional[int], sigma0_sq: Optional[float], lam: Optional[float],
                 lipschitz: Optional[float], posterior: Optional[float], seed: Optional[int],
                 epsilon: Optional[float], out: Optional[str], config_paths: Tuple[str, ...], stamp_time: bool):
    """Compare inverse-distance and uniform estimators under distance-dependent noise.

    Examples:
        manifold-rectify variance
        manifold-rectify variance --k 1
        manifold-rectify variance --lambda 0 --trials 20000
    """
    config = _resolve(config_paths, {
        'experiments.variance.k': k,
        'experiments.variance.n_trials': trials,
        'experiments.variance.sigma0_sq': sigma0_sq,
        'experiments.variance.lambda': lam,
        'experiments.variance.lipschitz': lipschitz,
        'experiments.variance.posterior': posterior,
        'experiments.variance.seed': seed,
        'gmr.epsilon': epsilon,
    })
    settings = get_config_value(config, 'experiments.variance', {})
    noise = NoiseModel(sigma0_sq=settings.get('sigma0_sq', 0.05), lam=settings.get('lambda', 10.0),
                       lipschitz=settings.get('lipschitz', 0.0))
    try:
        result = variance_reduction_experiment(
            noise,
            k=settings.get('k', 15),
            n_trials=settings.get('n_trials', 50000),
            seed=settings.get('seed', 0),
            posterior=settings.get('posterior', 0.05),
            epsilon=get_config_value(config, 'gmr.epsilon', 1e-8),
        )
    except ValueError as e:
        raise click.UsageError(str(e))

    json_path = resolve_output_path(out, _reports_dir(config), generate_filename('variance', f'k{result.k}'))
    manifest = build_manifest('variance', config, seeds=[settings.get('seed', 0)], stamp_time=stamp_time)
    write_json({'manifest': manifest.to_dict(), 'variance': result.to_dict()}, json_path)
    status(f"📄 Variance report saved to: {json_path}")

    click.echo(
        f"mse_geometric={result.mse_geometric:.6g} mse_uniform={result.mse_uniform:.6g} "
        f"k_eff={result.k_eff:.3f} k={result.k}"
    )


@cli.command('generate')
@click.option('--n-majority', type=int, default=500, show_default=True, help='Majority rows')
@click.option('--n-minority', type=int, default=50, show_default=True, help='Minority rows')
@click.option('--dim', type=int, default=2, show_default=True, help='Feature dimension')
@click.option('--separation', type=float, default=1.0, show_default=True, help='Distance between means, in units of std')
@click.option('--std', type=float, default=1.0, show_default=True, help='Shared standard deviation')
@click.option('--seed', type=click.IntRange(min=0), default=0, show_default=True, help='PCG64 seed')
@click.option('--out', default=None, help='CSV path (default: <reports_dir>/synthetic_seed<SEED>.csv)')
@click.option('--report', 'report_path', default=None, help='Manifest JSON path (default: next to the CSV)')
@config_options
@handle_errors
def generate_cmd(n_majority: int, n_minority: int, dim: int, separation: float, std: float, seed: int,
                 out: Optional[str], report_path: Optional[str], config_paths: Tuple[str, ...], stamp_time: bool):
    """Write a seeded two-Gaussian overlap dataset (label column 'label', minority = 1).

    Examples:
        manifold-rectify generate --seed 7 --out overlap.csv
    """
    if dim < 1:
        raise click.BadParameter("must be at least 1", param_hint='--dim')
    config = _resolve(config_paths, {})
    spec = SyntheticSpec.separated(n_majority, n_minority, dim=dim, separation=separation, std=std, seed=seed)
    data = generate_overlap(spec)

    csv_path = resolve_output_path(out, _reports_dir(config), f'synthetic_seed{seed}.csv')
    export_csv(data, csv_path)
    json_path = report_path or str(Path(csv_path).with_suffix('.json'))
    generator = {'n_majority': n_majority, 'n_minority': n_minority, 'dim': dim,
                 'separation': separation, 'std': std, 'seed': seed}
    manifest = build_manifest('generate', config, seeds=[seed], stamp_time=stamp_time)
    write_json({'manifest': manifest.to_dict(), 'generator': generator, 'csv_digest': file_digest(csv_path)},
               json_path)

    click.echo(f"rows={data.n_samples} majority={n_majority} minority={n_minority} "
               f"digest={file_digest(csv_path)} path={csv_path}")


@cli.command('shift')
@click.option('--n-majority', type=int, default=None, help='Majority rows per seed (default: 500)')
@click.option('--n-minority', type=int, default=None, help='Minority rows per seed (default: 50)')
@click.option('--dim', type=int, default=None, help='Feature dimension (default: 2)')
@click.option('--separation', type=float, default=None, help='Distance between means, in units of std (default: 1.0)')
@click.option('--std', type=float, default=None, help='Shared standard deviation (default: 1.0)')
@click.option('--n-seeds', type=int, default=None, help='Seeds to run (default: 20)')
@click.option('--base-seed', type=click.IntRange(min=0), default=0, show_default=True, help='First seed')
@click.option('--no-control', is_flag=True, help='Skip the symmetric random-removal control arm')
@gmr_options
@click.option('--out', default=None, help='JSON path (default: <reports_dir>/posterior_shift_experiment_ir<IR>.json)')
@config_options
@handle_errors
def shift_cmd(n_majority: Optional[int], n_minority: Optional[int], dim: Optional[int],
              separation: Optional[float], std: Optional[float], n_seeds: Optional[int], base_seed: int,
              no_control: bool, out: Optional[str], config_paths: Tuple[str, ...], stamp_time: bool, **gmr):
    """Measure the overlap-region posterior shift caused by GMR cleaning.

    Examples:
        manifold-rectify shift
        manifold-rectify shift --n-seeds 5 --separation 1.5
    """
    overrides = _gmr_overrides(gmr)
    overrides.update({
        'experiments.posterior_shift.n_majority': n_majority,
        'experiments.posterior_shift.n_minority': n_minority,
        'experiments.posterior_shift.dim': dim,
        'experiments.posterior_shift.separation': separation,
        'experiments.posterior_shift.std': std,
        'experiments.posterior_shift.n_seeds': n_seeds,
    })
    config = _resolve(config_paths, overrides)
    cleaning = build_cleaning_config(config)
    settings = get_config_value(config, 'experiments.posterior_shift', {})
    spec = SyntheticSpec.separated(
        settings.get('n_majority', 500), settings.get('n_minority', 50), dim=settings.get('dim', 2),
        separation=settings.get('separation', 1.0), std=settings.get('std', 1.0), seed=base_seed,
    )
    seeds_run = settings.get('n_seeds', 20)
    summary = posterior_shift_experiment(spec, cleaning, n_seeds=seeds_run, control=not no_control)

    json_path = resolve_output_path(out, _reports_dir(config),
                                    generate_filename('posterior_shift_experiment', f'ir{spec.imbalance_ratio:g}'))
    manifest = build_manifest('shift', _manifest_config(config, cleaning),
                              seeds=range(base_seed, base_seed + seeds_run), stamp_time=stamp_time)
    write_json({'manifest': manifest.to_dict(), 'summary': summary.to_dict()}, json_path)
    status(f"📄 Posterior shift report saved to: {json_path}")

    control = "n/a" if no_control else f"{summary.mean_control_delta:+.4f}"
    click.echo(
        f"mean_delta={summary.mean_delta:+.4f} control_delta={control} "
        f"fraction_positive={summary.fraction_positive:.2f} seeds={len(summary.seeds)}"
    )


if __name__ == '__main__':
    cli()
