"""
Trial records, aggregate summaries and report files.

report.jsonl holds one record per line followed by a summary line. Runtimes
go to timings.jsonl so that reruns with the same seeds give byte-identical
reports.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

QUANTILES = (0.1, 0.5, 0.9)


@dataclass
class TrialRecord:
    """Outcome of one trial at one grid point."""

    trial: int
    seed: int
    point: Dict[str, Any]
    gamma: Optional[float] = None
    metrics: Dict[str, Any] = field(default_factory=dict)
    checks: Dict[str, bool] = field(default_factory=dict)
    error: Optional[str] = None
    runtime: float = 0.0

    def passed(self, success_gamma: float) -> bool:
        """No error, every check holds and gamma (when measured) is within success_gamma."""
        if self.error is not None:
            return False
        if self.gamma is not None and self.gamma > success_gamma:
            return False
        return all(self.checks.values())

    def to_dict(self) -> Dict[str, Any]:
        return {
            'trial': self.trial,
            'seed': self.seed,
            'point': _plain(self.point),
            'gamma': _plain(self.gamma),
            'metrics': _plain(self.metrics),
            'checks': {key: bool(value) for key, value in self.checks.items()},
            'error': self.error,
        }


def _plain(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, np.generic):
        return value.item()
    return value


def _point_key(point: Dict[str, Any]) -> str:
    return ", ".join(f"{key}={value}" for key, value in point.items())


def _error_kinds(records: Sequence[TrialRecord]) -> Dict[str, int]:
    kinds: Dict[str, int] = {}
    for record in records:
        if record.error is not None:
            name = record.error.split(':', 1)[0]
            kinds[name] = kinds.get(name, 0) + 1
    return kinds


def summarize(records: Sequence[TrialRecord], success_gamma: float) -> Dict[str, Any]:
    """
    Aggregates per grid point, in first-appearance order.

    For each point: trial and error counts (errors also tallied by exception
    name), success rate, gamma mean, max and quantiles, mean and max of
    every numeric metric, and the pass rate of every check.
    """
    groups: Dict[str, List[TrialRecord]] = {}
    points: Dict[str, Dict[str, Any]] = {}
    for record in records:
        key = _point_key(record.point)
        groups.setdefault(key, []).append(record)
        points.setdefault(key, record.point)

    summary = []
    for key, group in groups.items():
        entry: Dict[str, Any] = {
            'point': _plain(points[key]),
            'trials': len(group),
            'errors': sum(1 for r in group if r.error is not None),
            'error_kinds': _error_kinds(group),
            'successes': sum(1 for r in group if r.passed(success_gamma)),
        }
        entry['success_rate'] = entry['successes'] / entry['trials']

        gammas = np.array([r.gamma for r in group if r.gamma is not None], dtype=float)
        if gammas.size:
            entry['gamma_mean'] = float(gammas.mean())
            entry['gamma_max'] = float(gammas.max())
            for q in QUANTILES:
                entry[f'gamma_q{int(q * 100)}'] = float(np.quantile(gammas, q))

        metric_names: List[str] = []
        for record in group:
            metric_names.extend(name for name in record.metrics if name not in metric_names)
        metrics = {}
        for name in metric_names:
            values = np.array(
                [r.metrics[name] for r in group
                 if isinstance(r.metrics.get(name), (int, float, np.number))
                 and not isinstance(r.metrics.get(name), bool)],
                dtype=float,
            )
            if values.size:
                metrics[name] = {'mean': float(values.mean()), 'max': float(values.max())}
        if metrics:
            entry['metrics'] = metrics

        check_names: List[str] = []
        for record in group:
            check_names.extend(name for name in record.checks if name not in check_names)
        if check_names:
            entry['checks'] = {
                name: sum(1 for r in group if r.checks.get(name)) / len(group)
                for name in check_names
            }
        summary.append(entry)
    return {'success_gamma': success_gamma, 'points': summary}


@dataclass
class ExperimentReport:
    """Records of every trial plus the aggregates recomputed from them."""

    name: str
    pipeline: str
    success_gamma: float
    records: List[TrialRecord]

    @property
    def summary(self) -> Dict[str, Any]:
        return summarize(self.records, self.success_gamma)

    @property
    def success_count(self) -> int:
        return sum(1 for r in self.records if r.passed(self.success_gamma))

    def check_rate(self, name: str) -> float:
        """Fraction of trials whose named check holds."""
        if not self.records:
            return 0.0
        return sum(1 for r in self.records if r.checks.get(name)) / len(self.records)

    def metric(self, name: str) -> np.ndarray:
        return np.array([r.metrics[name] for r in self.records if name in r.metrics], dtype=float)

    def summary_rows(self) -> List[Dict[str, Any]]:
        """One flat row per grid point, for table output."""
        rows = []
        for entry in self.summary['points']:
            row = {'point': _point_key(entry['point']), 'trials': entry['trials'],
                   'errors': entry['errors'], 'success_rate': round(entry['success_rate'], 4)}
            if 'gamma_mean' in entry:
                row['gamma_mean'] = round(entry['gamma_mean'], 4)
                row['gamma_q90'] = round(entry['gamma_q90'], 4)
            rows.append(row)
        return rows


def write_report(report: ExperimentReport, output_dir: Union[str, Path]) -> Path:
    """
    Write report.jsonl and timings.jsonl under output_dir.

    Returns:
        Path of report.jsonl
    """
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)

    lines = [json.dumps(record.to_dict()) for record in report.records]
    lines.append(json.dumps({
        'summary': {
            'name': report.name,
            'pipeline': report.pipeline,
            **report.summary,
        }
    }))
    report_path = output_dir / 'report.jsonl'
    with open(report_path, 'w', newline='\n') as f:
        f.write("\n".join(lines) + "\n")

    with open(output_dir / 'timings.jsonl', 'w', newline='\n') as f:
        for record in report.records:
            f.write(json.dumps({'trial': record.trial, 'runtime': round(record.runtime, 6)}) + "\n")
    return report_path


def read_report(path: Union[str, Path]) -> ExperimentReport:
    """Load a report.jsonl back into records (runtimes are not stored there)."""
    records, summary = [], None
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        data = json.loads(line)
        if 'summary' in data:
            summary = data['summary']
            continue
        records.append(TrialRecord(
            trial=data['trial'],
            seed=data['seed'],
            point=data['point'],
            gamma=data['gamma'],
            metrics=data['metrics'],
            checks=data['checks'],
            error=data['error'],
        ))
    if summary is None:
        raise ValueError(f"{path}: no summary line")
    return ExperimentReport(summary['name'], summary['pipeline'], summary['success_gamma'], records)
