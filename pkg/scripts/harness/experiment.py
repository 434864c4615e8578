"""
Batch runner: every grid point times every seed, optionally in a process pool.
"""

from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from common import get_logger
from .config import ExperimentConfig
from .report import ExperimentReport, write_report
from .suites import run_trial

logger = get_logger(__name__)


def run_experiment(config: ExperimentConfig, write: bool = True) -> ExperimentReport:
    """
    Run config.trials seeded trials at every grid point.

    Trial t at grid point i uses seed config.seed + t and trial index
    i * trials + t. Records are ordered by trial index whatever the worker
    count, so the report does not depend on scheduling.

    Args:
        config: Validated experiment description
        write: Write report.jsonl, timings.jsonl and heatmaps to config.output_dir

    Returns:
        ExperimentReport with one record per trial
    """
    points = config.grid()
    heatmap_dir = None
    if write and config.heatmaps:
        heatmap_dir = Path(config.output_dir) / 'heatmaps'
        heatmap_dir.mkdir(parents=True, exist_ok=True)
    options = config.trial_options(heatmap_dir)

    jobs = [
        (config.pipeline, point, config.seed + t, index * config.trials + t, options)
        for index, point in enumerate(points)
        for t in range(config.trials)
    ]
    logger.info(
        f"Running '{config.name}': {config.pipeline}, {len(points)} grid point(s), "
        f"{len(jobs)} trial(s), {config.workers} worker(s)"
    )

    if config.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as executor:
            records = list(executor.map(run_trial, *zip(*jobs)))
    else:
        records = [run_trial(*job) for job in jobs]
    records.sort(key=lambda record: record.trial)

    report = ExperimentReport(config.name, config.pipeline, config.success_gamma, records)
    logger.info(f"Finished '{config.name}': {report.success_count}/{len(records)} trials passed")

    if write:
        path = write_report(report, config.output_dir)
        logger.info(f"Report written to {path}")
    return report
