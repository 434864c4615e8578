"""
Experiment configuration files.

INI files with an [experiment] section naming the pipeline and the trial
plan, a [model] section whose values may be comma-separated lists (the
experiment runs their Cartesian product in declaration order), and optional
[twoblock], [multiblock] and [censor] sections overriding stage constants.
"""

import configparser
import itertools
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

from common import ConfigError, get_logger
from common.config import DEFAULTS
from graph import SbmParams
from twoblock import TwoBlockConfig
from multiblock import MultiConfig
from censor import CensorConfig
from .suites import PIPELINES, REQUIRED_MODEL

logger = get_logger(__name__)

SECTION_RE = re.compile(r'^\s*\[([^\]]+)\]')
KEY_RE = re.compile(r'^([^\s=:#;][^=:]*?)\s*[=:]')


def _boolean(value: str) -> bool:
    states = configparser.ConfigParser.BOOLEAN_STATES
    if value.lower() not in states:
        raise ValueError(f"expected a boolean, got '{value}'")
    return states[value.lower()]


EXPERIMENT_FIELDS: Dict[str, Callable[[str], Any]] = {
    'name': str,
    'pipeline': str,
    'trials': int,
    'seed': int,
    'workers': int,
    'success_gamma': float,
    'output_dir': str,
    'heatmaps': _boolean,
    'heatmap_bins': int,
    'corruption': float,
}

MODEL_FIELDS: Dict[str, Callable[[str], Any]] = {
    'n': int,
    'k': int,
    'a': float,
    'b': float,
    'p': float,
    'epsilon': float,
}

STAGE_FIELDS: Dict[str, Dict[str, Callable[[str], Any]]] = {
    'twoblock': {
        'trim_factor': float,
        'correction_threshold': float,
        'correction_rounds': int,
        'tol': float,
    },
    'multiblock': {
        'm': int,
        'set_size': int,
        'overlap_limit': int,
        'merge_threshold': float,
        'trim_factor': float,
        'tol': float,
        'reserve': _boolean,
    },
    'censor': {
        'trim_factor': float,
        'degree': str,
        'tol': float,
    },
}

SECTIONS = ('experiment', 'model') + tuple(STAGE_FIELDS)


@dataclass
class ExperimentConfig:
    """A validated experiment description."""

    name: str
    pipeline: str
    trials: int = 1
    seed: int = 0
    workers: int = 1
    success_gamma: float = 0.15
    output_dir: str = 'results'
    heatmaps: bool = False
    heatmap_bins: int = 100
    corruption: float = 0.1
    model: Dict[str, List[Any]] = field(default_factory=dict)
    twoblock: Dict[str, Any] = field(default_factory=dict)
    multiblock: Dict[str, Any] = field(default_factory=dict)
    censor: Dict[str, Any] = field(default_factory=dict)

    def grid(self) -> List[Dict[str, Any]]:
        """Every model parameter combination, first key varying slowest."""
        keys = list(self.model)
        return [dict(zip(keys, values)) for values in itertools.product(*self.model.values())]

    def trial_options(self, heatmap_dir: Optional[Path] = None) -> Dict[str, Any]:
        """The options dict handed to every trial."""
        return {
            'twoblock': dict(self.twoblock),
            'multiblock': dict(self.multiblock),
            'censor': dict(self.censor),
            'corruption': self.corruption,
            'heatmap_dir': str(heatmap_dir) if heatmap_dir else None,
            'heatmap_bins': self.heatmap_bins,
        }

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'pipeline': self.pipeline,
            'trials': self.trials,
            'seed': self.seed,
            'workers': self.workers,
            'success_gamma': self.success_gamma,
            'output_dir': self.output_dir,
            'heatmaps': self.heatmaps,
            'heatmap_bins': self.heatmap_bins,
            'corruption': self.corruption,
            'model': {key: list(values) for key, values in self.model.items()},
            'grid_points': len(self.grid()),
            'twoblock': dict(self.twoblock),
            'multiblock': dict(self.multiblock),
            'censor': dict(self.censor),
        }


def _line_numbers(text: str) -> Dict[Tuple[str, str], int]:
    """Map (section, key) to the 1-based line defining it."""
    lines: Dict[Tuple[str, str], int] = {}
    section = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        match = SECTION_RE.match(line)
        if match:
            section = match.group(1).strip()
            lines[(section, '')] = lineno
            continue
        match = KEY_RE.match(line)
        if match and section is not None:
            lines.setdefault((section, match.group(1).strip().lower()), lineno)
    return lines


def _convert(raw: str, convert: Callable[[str], Any], section: str, key: str,
             line: Optional[int]) -> Any:
    try:
        return convert(raw.strip())
    except ValueError:
        raise ConfigError(f"invalid value '{raw}'", section, key, line)


def _section(parser: configparser.ConfigParser, section: str,
             fields: Dict[str, Callable[[str], Any]],
             lines: Dict[Tuple[str, str], int]) -> Dict[str, Any]:
    if not parser.has_section(section):
        return {}
    values = {}
    for key, raw in parser.items(section):
        line = lines.get((section, key))
        if key not in fields:
            raise ConfigError("unknown key", section, key, line)
        values[key] = _convert(raw, fields[key], section, key, line)
    return values


def _model(parser: configparser.ConfigParser,
           lines: Dict[Tuple[str, str], int]) -> Dict[str, List[Any]]:
    if not parser.has_section('model'):
        return {}
    model = {}
    for key, raw in parser.items('model'):
        line = lines.get(('model', key))
        if key not in MODEL_FIELDS:
            raise ConfigError("unknown key", 'model', key, line)
        items = [item for item in raw.split(',') if item.strip()]
        if not items:
            raise ConfigError("empty value list", 'model', key, line)
        model[key] = [_convert(item, MODEL_FIELDS[key], 'model', key, line) for item in items]
    return model


def _check_point(config: ExperimentConfig, point: Dict[str, Any],
                 lines: Dict[Tuple[str, str], int]) -> None:
    """Build every object a trial at this point needs, reporting failures as ConfigError."""
    pipeline = config.pipeline
    stage = 'model'
    try:
        if pipeline == 'censor':
            if point['n'] < 1:
                raise ValueError(f"n must be positive, got {point['n']}")
            if not 0 < point['p'] <= 1:
                raise ValueError(f"p must lie in (0, 1], got {point['p']}")
            if not 0 < point['epsilon'] < 0.5:
                raise ValueError(f"epsilon must lie in (0, 1/2), got {point['epsilon']}")
            stage = 'censor'
            CensorConfig(**config.censor)
        elif 'k' in REQUIRED_MODEL[pipeline]:
            params = SbmParams.k_block(point['n'], point['k'], point['a'], point['b'])
            stage = 'multiblock'
            MultiConfig.from_rates(params.a, params.b, params.k, params.num_vertices,
                                   **config.multiblock)
        else:
            SbmParams.two_block(point['n'], point['a'], point['b'])
            if pipeline in ('twoblock', 'correction2'):
                stage = 'twoblock'
                TwoBlockConfig(a=point['a'], b=point['b'], **config.twoblock)
    except ValueError as e:
        where = ", ".join(f"{key}={value}" for key, value in point.items())
        raise ConfigError(f"{e} (at {where})", stage, None, lines.get((stage, '')))


def _validate(config: ExperimentConfig, lines: Dict[Tuple[str, str], int]) -> None:
    def fail(message: str, key: str) -> None:
        raise ConfigError(message, 'experiment', key, lines.get(('experiment', key)))

    if config.pipeline not in PIPELINES:
        fail(f"unknown pipeline '{config.pipeline}', expected one of "
             f"{', '.join(PIPELINES)}", 'pipeline')
    if config.trials < 1:
        fail(f"must be at least 1, got {config.trials}", 'trials')
    if config.seed < 0:
        fail(f"must be non-negative, got {config.seed}", 'seed')
    if config.workers < 1:
        fail(f"must be at least 1, got {config.workers}", 'workers')
    if not 0 <= config.success_gamma <= 1:
        fail(f"must lie in [0, 1], got {config.success_gamma}", 'success_gamma')
    if config.heatmap_bins < 1:
        fail(f"must be at least 1, got {config.heatmap_bins}", 'heatmap_bins')
    if not 0 <= config.corruption <= 1:
        fail(f"must lie in [0, 1], got {config.corruption}", 'corruption')

    for key in REQUIRED_MODEL[config.pipeline]:
        if key not in config.model:
            raise ConfigError(f"required by pipeline '{config.pipeline}'", 'model', key,
                              lines.get(('model', '')))
    for point in config.grid():
        _check_point(config, point, lines)


def parse_experiment_config(
    text: str,
    source: str = '<string>',
    overrides: Optional[Dict[str, str]] = None,
    env: Optional[Dict[str, Any]] = None
) -> ExperimentConfig:
    """
    Parse and validate an experiment description.

    Args:
        text: INI text
        source: File name, used for the default experiment name
        overrides: 'section.key' -> raw value, applied before validation
        env: Run defaults from load_config (SBM_WORKERS, SBM_OUTPUT_DIR)

    Raises:
        ConfigError: Naming the section, field and line of the first problem
    """
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text, source=source)
    except configparser.Error as e:
        raise ConfigError(str(e).splitlines()[0], line=getattr(e, 'lineno', None))
    lines = _line_numbers(text)

    for dotted, value in (overrides or {}).items():
        section, key = dotted.split('.', 1)
        if section not in SECTIONS:
            raise ConfigError("unknown section in override", section, key)
        if not parser.has_section(section):
            parser.add_section(section)
        parser.set(section, key.lower(), value)
        lines.pop((section, key.lower()), None)

    for section in parser.sections():
        if section not in SECTIONS:
            raise ConfigError("unknown section", section, None, lines.get((section, '')))
    if not parser.has_section('experiment'):
        raise ConfigError("missing section", 'experiment')

    values = _section(parser, 'experiment', EXPERIMENT_FIELDS, lines)
    if 'pipeline' not in values:
        raise ConfigError("missing required key", 'experiment', 'pipeline',
                          lines.get(('experiment', '')))

    env = env or {}
    stem = Path(source).stem if source != '<string>' else values['pipeline']
    values.setdefault('name', stem)
    values.setdefault('workers', int(env.get('SBM_WORKERS', DEFAULTS['SBM_WORKERS'])))
    values.setdefault(
        'output_dir',
        str(Path(env.get('SBM_OUTPUT_DIR', DEFAULTS['SBM_OUTPUT_DIR'])) / values['name'])
    )

    config = ExperimentConfig(
        model=_model(parser, lines),
        **values,
        **{stage: _section(parser, stage, fields, lines) for stage, fields in STAGE_FIELDS.items()},
    )
    _validate(config, lines)
    logger.debug(f"Loaded experiment '{config.name}' with {len(config.grid())} grid point(s)")
    return config


def load_experiment_config(
    path: Union[str, Path],
    overrides: Optional[Dict[str, str]] = None,
    env: Optional[Dict[str, Any]] = None
) -> ExperimentConfig:
    """Read an experiment file; see parse_experiment_config."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e.strerror}")
    return parse_experiment_config(text, str(path), overrides, env)
