"""
Evaluation, verification suites and the experiment runner.
"""

from .metrics import GammaReport, corrupt_clustering, gamma_correctness, overlap_matrix
from .heatmap import density_heatmap, heatmap_counts, write_pgm
from .report import ExperimentReport, TrialRecord, read_report, summarize, write_report
from .suites import (
    PIPELINES,
    REQUIRED_MODEL,
    run_trial,
    verify_correction_multi,
    verify_correction_two,
    verify_merge_multi,
    verify_norm_bounds,
    verify_projection_property,
    verify_trimming,
)
from .config import ExperimentConfig, load_experiment_config, parse_experiment_config
from .experiment import run_experiment

__all__ = [
    'GammaReport',
    'corrupt_clustering',
    'gamma_correctness',
    'overlap_matrix',
    'density_heatmap',
    'heatmap_counts',
    'write_pgm',
    'ExperimentReport',
    'TrialRecord',
    'read_report',
    'summarize',
    'write_report',
    'PIPELINES',
    'REQUIRED_MODEL',
    'run_trial',
    'verify_correction_multi',
    'verify_correction_two',
    'verify_merge_multi',
    'verify_norm_bounds',
    'verify_projection_property',
    'verify_trimming',
    'ExperimentConfig',
    'load_experiment_config',
    'parse_experiment_config',
    'run_experiment',
]
