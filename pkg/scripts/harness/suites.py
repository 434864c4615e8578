"""
Per-trial pipeline runs and statistical verification suites.

Every trial function takes a grid point (model parameters), a seed and an
options dict, and returns an Outcome. run_trial wraps one call into a
TrialRecord; it is a top-level function so process pools can pickle it.
"""

import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, Optional

import numpy as np
from scipy.sparse.linalg import LinearOperator

from common import RecoveryError, get_logger
from graph import (
    Clustering,
    Graph,
    SbmParams,
    color_edges,
    sample_censor,
    sample_sbm,
    split_vertices,
)
from spectral import (
    BipartiteSparse,
    SparseSym,
    project,
    spectral_norm,
    subspace_angle,
    top_eigenspace,
    trim_high_degree,
)
from twoblock import (
    TwoBlockConfig,
    correction_two,
    expected_operator,
    expected_subspace,
    gamma_bound_two,
    keep_mask,
    partition_two,
)
from multiblock import (
    MultiConfig,
    column_space,
    correction_multi,
    draw_columns,
    gamma_bound_components,
    gamma_bound_multi,
    merge_multi,
    partition_multi,
)
from censor import CensorConfig, partition_censor
from .heatmap import density_heatmap, write_pgm
from .metrics import corrupt_clustering, gamma_correctness
from .report import ExperimentReport, TrialRecord

logger = get_logger(__name__)

NORM_TOL = 1e-6
DAVIS_KAHAN_SLACK = -1e-6
DELTA_LIMIT = 1.0
NOISE_LIMIT = 10.0


@dataclass
class Outcome:
    """What a trial measured; graph and clustering are kept for heatmaps."""

    gamma: Optional[float] = None
    metrics: Dict[str, Any] = field(default_factory=dict)
    checks: Dict[str, bool] = field(default_factory=dict)
    graph: Optional[Graph] = None
    clustering: Optional[Clustering] = None


def _two_block(point: Dict[str, Any]) -> SbmParams:
    return SbmParams.two_block(int(point['n']), float(point['a']), float(point['b']))


def _k_block(point: Dict[str, Any]) -> SbmParams:
    return SbmParams.k_block(int(point['n']), int(point['k']), float(point['a']), float(point['b']))


def _multi_config(params: SbmParams, options: Dict[str, Any]) -> MultiConfig:
    return MultiConfig.from_rates(
        params.a, params.b, params.k, params.num_vertices, **options.get('multiblock', {})
    )


def _operator(dimension: int, matmat: Callable[[np.ndarray], np.ndarray]) -> LinearOperator:
    return LinearOperator(
        shape=(dimension, dimension),
        matvec=lambda x: matmat(np.asarray(x).reshape(dimension, 1)).ravel(),
        matmat=matmat,
        dtype=np.float64,
    )


def twoblock_trial(point: Dict[str, Any], seed: int, options: Dict[str, Any]) -> Outcome:
    params = _two_block(point)
    g, truth = sample_sbm(params, seed)
    cfg = TwoBlockConfig(a=params.a, b=params.b, **options.get('twoblock', {}))
    pred = partition_two(g, params.a, params.b, seed, cfg)
    report = gamma_correctness(pred, truth)
    metrics = {
        'misclassified_fraction': report.misclassified_fraction,
        'trimmed': len(pred.trimmed),
        'gamma_bound': gamma_bound_two(params.a, params.b),
        'edges': g.edge_count,
    }
    return Outcome(report.gamma, metrics, {}, g, pred)


def multiblock_trial(point: Dict[str, Any], seed: int, options: Dict[str, Any]) -> Outcome:
    params = _k_block(point)
    g, truth = sample_sbm(params, seed)
    cfg = _multi_config(params, options)
    pred = partition_multi(g, params.a, params.b, params.k, seed, cfg)
    report = gamma_correctness(pred, truth)
    metrics = {
        'misclassified_fraction': report.misclassified_fraction,
        'trimmed': len(pred.trimmed),
        'gamma_bound': gamma_bound_multi(params.a, params.b, params.k),
        'edges': g.edge_count,
    }
    return Outcome(report.gamma, metrics, {}, g, pred)


def censor_trial(point: Dict[str, Any], seed: int, options: Dict[str, Any]) -> Outcome:
    inst = sample_censor(int(point['n']), float(point['p']), float(point['epsilon']), seed)
    pred = partition_censor(inst, CensorConfig(**options.get('censor', {})))
    report = gamma_correctness(pred, inst.truth())
    metrics = {
        'misclassified_fraction': report.misclassified_fraction,
        'trimmed': len(pred.trimmed),
        'edges': inst.graph.edge_count,
    }
    return Outcome(report.gamma, metrics, {}, inst.graph, pred)


def norm_bounds_trial(point: Dict[str, Any], seed: int, options: Dict[str, Any]) -> Outcome:
    """
    Measure ||Delta||, ||E|| and sin(W, W_bar) on one sampled two-block graph.

    Delta = A_bar - A0_bar is the change trimming makes to the expected
    adjacency, E = A - A_bar the noise of the trimmed adjacency A. W is the
    top-2 eigenspace of A and W_bar the expected one.
    """
    params = _two_block(point)
    tol = options.get('norm_tol', NORM_TOL)
    trim_factor = options.get('twoblock', {}).get('trim_factor', 20.0)
    g, _ = sample_sbm(params, seed)

    d = params.a + params.b
    if d > 0:
        matrix, trimmed = trim_high_degree(g, trim_factor * d)
    else:
        matrix, trimmed = SparseSym.from_graph(g), frozenset()

    total = g.num_vertices
    expected = expected_operator(params)
    expected_trimmed = expected_operator(params, keep_mask(total, trimmed))
    adjacency = matrix.matrix
    delta = _operator(total, lambda x: expected_trimmed.matmat(x) - expected.matmat(x))
    noise = _operator(total, lambda x: adjacency @ x - expected_trimmed.matmat(x))

    norm_delta = spectral_norm(delta, tol=tol)
    norm_noise = spectral_norm(noise, tol=tol)
    metrics = {
        'norm_delta': norm_delta,
        'norm_e': norm_noise,
        'trimmed': len(trimmed),
    }
    checks = {'delta_bound': norm_delta <= DELTA_LIMIT}
    if d > 0:
        metrics['norm_e_scaled'] = norm_noise / math.sqrt(d)
        checks['noise_bound'] = metrics['norm_e_scaled'] <= NOISE_LIMIT

    gap = params.a - params.b
    if gap > 0:
        space = top_eigenspace(matrix, 2, tol=tol)
        angle = subspace_angle(space, expected_subspace(params))
        metrics['sin_angle'] = angle
        metrics['davis_kahan_slack'] = (norm_noise + norm_delta) / gap - angle
        checks['davis_kahan'] = metrics['davis_kahan_slack'] >= DAVIS_KAHAN_SLACK
    else:
        logger.warning("Davis-Kahan check skipped: a = b leaves no eigen-gap")
    return Outcome(None, metrics, checks)


def trimming_trial(point: Dict[str, Any], seed: int, options: Dict[str, Any]) -> Outcome:
    """Fraction of vertices above trim_factor * (a+b), against a^-3."""
    params = _two_block(point)
    trim_factor = options.get('twoblock', {}).get('trim_factor', 20.0)
    g, _ = sample_sbm(params, seed)
    _, trimmed = trim_high_degree(g, trim_factor * (params.a + params.b))
    fraction = len(trimmed) / g.num_vertices
    limit = params.a ** -3
    return Outcome(
        None,
        {'trimmed_fraction': fraction, 'limit': limit, 'max_degree': int(g.degrees().max(initial=0))},
        {'trimmed_within_limit': fraction <= limit},
    )


def correction_two_trial(point: Dict[str, Any], seed: int, options: Dict[str, Any]) -> Outcome:
    """Correct a corrupted ground truth with the Blue half of the graph."""
    params = _two_block(point)
    g, truth = sample_sbm(params, seed)
    _, blue = color_edges(g, seed)
    corrupted = corrupt_clustering(truth, options.get('corruption', 0.1), seed)
    cfg = TwoBlockConfig(a=params.a, b=params.b, **options.get('twoblock', {}))
    report = gamma_correctness(correction_two(corrupted, blue, cfg), truth)
    limit = min(1.0, 3 * gamma_bound_two(params.a, params.b))
    return Outcome(
        None,
        {'misclassified_fraction': report.misclassified_fraction, 'gamma': report.gamma, 'limit': limit},
        {'within_bound': report.misclassified_fraction <= limit},
    )


def _split_truth(params: SbmParams, seed: int):
    g, truth = sample_sbm(params, seed)
    red, blue = color_edges(g, seed)
    y, z = split_vertices(g.num_vertices, seed)
    return g, truth, red, blue, y, z


def correction_multi_trial(point: Dict[str, Any], seed: int, options: Dict[str, Any]) -> Outcome:
    """Correct a corrupted Z clustering with the Red edges inside Z."""
    params = _k_block(point)
    _, truth, red, _, _, z = _split_truth(params, seed)
    z_truth = Clustering(truth.labels[z], params.k)
    corrupted = corrupt_clustering(z_truth, options.get('corruption', 0.1), seed)
    corrected = correction_multi(corrupted.classes(), red.induced(z))
    report = gamma_correctness(corrected, z_truth)
    limit = min(1.0, 3 * gamma_bound_components(params.a, params.b, params.k)[0])
    return Outcome(
        None,
        {'misclassified_fraction': report.misclassified_fraction, 'gamma': report.gamma, 'limit': limit},
        {'within_bound': report.misclassified_fraction <= limit},
    )


def merge_multi_trial(point: Dict[str, Any], seed: int, options: Dict[str, Any]) -> Outcome:
    """Label Y from a corrupted Z clustering with the Blue Y-Z edges."""
    params = _k_block(point)
    _, truth, _, blue, y, z = _split_truth(params, seed)
    z_truth = Clustering(truth.labels[z], params.k)
    corrupted = corrupt_clustering(z_truth, options.get('corruption', 0.1), seed)
    merged = merge_multi(
        corrupted, BipartiteSparse.from_graph(blue, y, z), y, z, _multi_config(params, options)
    )
    report = gamma_correctness(Clustering(merged.labels[y], params.k), Clustering(truth.labels[y], params.k))
    limit = min(1.0, 3 * gamma_bound_components(params.a, params.b, params.k)[1])
    return Outcome(
        None,
        {'misclassified_fraction': report.misclassified_fraction, 'gamma': report.gamma, 'limit': limit},
        {'within_bound': report.misclassified_fraction <= limit},
    )


def projection_trial(point: Dict[str, Any], seed: int, options: Dict[str, Any]) -> Outcome:
    """
    Fraction of drawn columns whose noise projects onto W with norm below
    2 sigma sqrt(k), sigma^2 = a/n.
    """
    params = _k_block(point)
    _, truth, red, _, y, z = _split_truth(params, seed)
    n = params.num_vertices
    cfg = _multi_config(params, options)
    b_matrix = BipartiteSparse.from_graph(red, z, y)
    columns = column_space(b_matrix, cfg, seed)
    drawn = draw_columns(columns.y2_columns, cfg, seed)

    z_labels = truth.labels[z]
    limit = 2 * math.sqrt(params.a / n) * math.sqrt(params.k)
    norms = []
    for j in drawn.tolist():
        expected = np.where(z_labels == truth.labels[y[j]], params.a / (2 * n), params.b / (2 * n))
        norms.append(float(np.linalg.norm(project(columns.space, b_matrix.column(j) - expected))))
    norms = np.array(norms)
    fraction = float(np.mean(norms < limit)) if norms.size else 0.0
    return Outcome(
        None,
        {'good_fraction': fraction, 'limit': limit, 'max_norm': float(norms.max(initial=0.0)),
         'columns': int(norms.size)},
        {'half_good': fraction >= 0.5},
    )


PIPELINES: Dict[str, Callable[[Dict[str, Any], int, Dict[str, Any]], Outcome]] = {
    'twoblock': twoblock_trial,
    'multiblock': multiblock_trial,
    'censor': censor_trial,
    'norms': norm_bounds_trial,
    'trimming': trimming_trial,
    'correction2': correction_two_trial,
    'correctionk': correction_multi_trial,
    'mergek': merge_multi_trial,
    'projection': projection_trial,
}

REQUIRED_MODEL = {
    'twoblock': ('n', 'a', 'b'),
    'norms': ('n', 'a', 'b'),
    'trimming': ('n', 'a', 'b'),
    'correction2': ('n', 'a', 'b'),
    'multiblock': ('n', 'k', 'a', 'b'),
    'correctionk': ('n', 'k', 'a', 'b'),
    'mergek': ('n', 'k', 'a', 'b'),
    'projection': ('n', 'k', 'a', 'b'),
    'censor': ('n', 'p', 'epsilon'),
}


def run_trial(
    pipeline: str,
    point: Dict[str, Any],
    seed: int,
    trial: int,
    options: Optional[Dict[str, Any]] = None
) -> TrialRecord:
    """
    Run one trial and record it. Pipeline failures (RecoveryError,
    ValueError) are recorded in the error field, not raised.
    """
    options = options or {}
    if pipeline not in PIPELINES:
        raise ValueError(f"unknown pipeline '{pipeline}'")

    start = time.perf_counter()
    try:
        outcome = PIPELINES[pipeline](point, seed, options)
    except (RecoveryError, ValueError) as e:
        logger.warning(f"Trial {trial} (seed {seed}) failed: {e}")
        return TrialRecord(trial, seed, dict(point), error=f"{type(e).__name__}: {e}",
                           runtime=time.perf_counter() - start)
    runtime = time.perf_counter() - start

    heatmap_dir = options.get('heatmap_dir')
    if heatmap_dir and outcome.graph is not None and outcome.clustering is not None:
        grid = density_heatmap(outcome.graph, outcome.clustering, options.get('heatmap_bins', 100))
        write_pgm(grid, Path(heatmap_dir) / f"trial_{trial:04d}.pgm")

    logger.debug(f"Trial {trial} (seed {seed}) finished in {runtime:.2f}s")
    return TrialRecord(
        trial=trial,
        seed=seed,
        point=dict(point),
        gamma=outcome.gamma,
        metrics=outcome.metrics,
        checks=outcome.checks,
        runtime=runtime,
    )


def _verify(pipeline: str, point: Dict[str, Any], trials: int, seed: int,
            options: Optional[Dict[str, Any]]) -> ExperimentReport:
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    records = [run_trial(pipeline, point, seed + t, t, options) for t in range(trials)]
    return ExperimentReport(pipeline, pipeline, 1.0, records)


def _two_block_point(params: SbmParams) -> Dict[str, Any]:
    if params.k != 2:
        raise ValueError("two_block parameters required")
    return {'n': params.block_size, 'a': params.a, 'b': params.b}


def _k_block_point(params: SbmParams) -> Dict[str, Any]:
    return {'n': params.num_vertices, 'k': params.k, 'a': params.a, 'b': params.b}


def verify_norm_bounds(params: SbmParams, trials: int, seed: int,
                       options: Optional[Dict[str, Any]] = None) -> ExperimentReport:
    """||Delta|| <= 1, ||E||/sqrt(d) <= 10 and Davis-Kahan slack per trial."""
    return _verify('norms', _two_block_point(params), trials, seed, options)


def verify_trimming(params: SbmParams, trials: int, seed: int,
                    options: Optional[Dict[str, Any]] = None) -> ExperimentReport:
    """Trimmed fraction <= a^-3 per trial."""
    return _verify('trimming', _two_block_point(params), trials, seed, options)


def verify_correction_two(params: SbmParams, trials: int, seed: int,
                          options: Optional[Dict[str, Any]] = None) -> ExperimentReport:
    """Corrected error <= 3 * gamma_bound_two per trial."""
    return _verify('correction2', _two_block_point(params), trials, seed, options)


def verify_correction_multi(params: SbmParams, trials: int, seed: int,
                            options: Optional[Dict[str, Any]] = None) -> ExperimentReport:
    return _verify('correctionk', _k_block_point(params), trials, seed, options)


def verify_merge_multi(params: SbmParams, trials: int, seed: int,
                       options: Optional[Dict[str, Any]] = None) -> ExperimentReport:
    return _verify('mergek', _k_block_point(params), trials, seed, options)


def verify_projection_property(params: SbmParams, trials: int, seed: int,
                               options: Optional[Dict[str, Any]] = None) -> ExperimentReport:
    """At least half of the drawn columns have small projected noise, per trial."""
    return _verify('projection', _k_block_point(params), trials, seed, options)
