#!/usr/bin/env python3
"""
Command-line interface for community recovery.

Subcommands:
- generate: sample a two-block, k-block or censor instance to files
- partition2, partitionk, censor: run a recovery pipeline on a file
- eval: gamma-correctness of one clustering file against another
- heatmap: block-density PGM of a clustered graph
- experiment: run an experiment configuration and write its report

Exit codes: 0 success, 1 pipeline or I/O error, 2 configuration error.
"""

import argparse
import sys
from pathlib import Path

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from common import (
    ROOT_LOGGER,
    ConfigError,
    RecoveryError,
    confirm_action,
    format_output,
    handle_error,
    load_config,
    parse_overrides,
    setup_logger,
)
from graph import (
    SbmParams,
    read_censor_observations,
    read_clustering,
    read_graph,
    sample_censor,
    sample_sbm,
    write_censor,
    write_clustering,
    write_graph,
)
from twoblock import TwoBlockConfig, partition_two
from multiblock import MultiConfig, partition_multi
from censor import CensorConfig, observation_matrix, spectral_partition_censor
from harness.config import load_experiment_config
from harness.experiment import run_experiment
from harness.heatmap import density_heatmap, write_pgm
from harness.metrics import gamma_correctness


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        '--verbose',
        action='store_true',
        help='Enable verbose logging'
    )


def parse_arguments(argv=None):
    """Parse command-line arguments."""
    parser = argparse.ArgumentParser(
        description='Spectral community recovery in sparse random graphs',
        formatter_class=argparse.RawDescriptionHelpFormatter
    )
    subparsers = parser.add_subparsers(dest='command', required=True)

    generate = subparsers.add_parser('generate', help='Sample a model instance to files')
    generate.add_argument('--model', choices=['two', 'k', 'censor'], required=True,
                          help='two_block SBM, k_block SBM or censor block model')
    generate.add_argument('--n', type=int, required=True,
                          help='Block size (two, censor) or total vertex count (k)')
    generate.add_argument('--k', type=int, default=3, help='Block count for --model k (default: 3)')
    generate.add_argument('--a', type=float, help='Within-block rate')
    generate.add_argument('--b', type=float, help='Cross-block rate')
    generate.add_argument('--p', type=float, help='Edge probability for --model censor')
    generate.add_argument('--epsilon', type=float, help='Label flip probability for --model censor')
    generate.add_argument('--seed', type=int, default=0, help='Random seed (default: 0)')
    generate.add_argument('--output-dir', required=True, help='Directory for the instance files')
    generate.add_argument('--force', action='store_true', help='Overwrite existing files without asking')
    _add_common(generate)

    two = subparsers.add_parser('partition2', help='Recover two blocks')
    two.add_argument('--graph', required=True, help='Graph file')
    two.add_argument('--a', type=float, required=True, help='Within-block rate')
    two.add_argument('--b', type=float, required=True, help='Cross-block rate')
    two.add_argument('--seed', type=int, default=0, help='Random seed (default: 0)')
    two.add_argument('--trim-factor', type=float, default=20.0, help='Trim above this times d (default: 20)')
    two.add_argument('--rounds', type=int, default=1, help='Correction rounds (default: 1)')
    two.add_argument('--output', required=True, help='Clustering file to write')
    _add_common(two)

    multi = subparsers.add_parser('partitionk', help='Recover k blocks')
    multi.add_argument('--graph', required=True, help='Graph file')
    multi.add_argument('--a', type=float, required=True, help='Within-block rate')
    multi.add_argument('--b', type=float, required=True, help='Cross-block rate')
    multi.add_argument('--k', type=int, required=True, help='Block count')
    multi.add_argument('--seed', type=int, default=0, help='Random seed (default: 0)')
    multi.add_argument('--set-size', type=int, default=None, help='Candidate set size (default: n/2k)')
    multi.add_argument('--output', required=True, help='Clustering file to write')
    _add_common(multi)

    cens = subparsers.add_parser('censor', help='Recover the hidden labeling of a censor instance')
    cens.add_argument('--observations', required=True, help='Censor observation file')
    cens.add_argument('--p', type=float, default=None,
                      help='Edge probability (default: estimated from the graph)')
    cens.add_argument('--degree', choices=['graph', 'labels'], default='graph',
                      help='Degrees used for trimming (default: graph)')
    cens.add_argument('--output', required=True, help='Clustering file to write')
    _add_common(cens)

    evaluate = subparsers.add_parser('eval', help='gamma-correctness of a clustering')
    evaluate.add_argument('--pred', required=True, help='Predicted clustering file')
    evaluate.add_argument('--truth', required=True, help='Ground-truth clustering file')
    evaluate.add_argument('--k', type=int, default=None, help='Block count (default: from labels)')
    evaluate.add_argument('--format', choices=['json', 'table', 'text'], default='table',
                          help='Output format (default: table)')
    _add_common(evaluate)

    heat = subparsers.add_parser('heatmap', help='Write a block-density PGM')
    heat.add_argument('--graph', required=True, help='Graph file')
    heat.add_argument('--clustering', required=True, help='Clustering file')
    heat.add_argument('--bins', type=int, default=100, help='Cells per side (default: 100)')
    heat.add_argument('--output', required=True, help='PGM file to write')
    _add_common(heat)

    experiment = subparsers.add_parser('experiment', help='Run an experiment configuration')
    experiment.add_argument('config', help='Experiment INI file')
    experiment.add_argument('--set', action='append', dest='overrides', metavar='SECTION.KEY=VALUE',
                            help='Override a configuration value (repeatable)')
    experiment.add_argument('--workers', type=int, default=None, help='Worker processes')
    experiment.add_argument('--output-dir', default=None, help='Report directory')
    experiment.add_argument('--dry-run', action='store_true',
                            help='Print the resolved configuration without running')
    experiment.add_argument('--format', choices=['json', 'table', 'text'], default='table',
                            help='Summary output format (default: table)')
    _add_common(experiment)

    return parser.parse_args(argv)


def cmd_generate(args, logger) -> int:
    output_dir = Path(args.output_dir)
    if args.model == 'censor':
        if args.p is None or args.epsilon is None:
            raise ValueError("--model censor needs --p and --epsilon")
        files = [output_dir / 'observations.txt', output_dir / 'truth.txt']
    else:
        if args.a is None or args.b is None:
            raise ValueError(f"--model {args.model} needs --a and --b")
        files = [output_dir / 'graph.txt', output_dir / 'truth.txt']

    existing = [str(path) for path in files if path.exists()]
    if existing and not args.force:
        if not confirm_action(f"Overwrite {', '.join(existing)}?", default=False):
            logger.info("Operation cancelled by user")
            return 0

    output_dir.mkdir(parents=True, exist_ok=True)
    if args.model == 'censor':
        inst = sample_censor(args.n, args.p, args.epsilon, args.seed)
        write_censor(inst, files[0])
        write_clustering(inst.truth(), files[1])
        logger.info(f"Censor instance: {inst.graph.num_vertices} vertices, {inst.graph.edge_count} edges")
    else:
        if args.model == 'two':
            params = SbmParams.two_block(args.n, args.a, args.b)
        else:
            params = SbmParams.k_block(args.n, args.k, args.a, args.b)
        g, truth = sample_sbm(params, args.seed)
        write_graph(g, files[0])
        write_clustering(truth, files[1])
        logger.info(f"SBM instance: {g.num_vertices} vertices, {g.edge_count} edges")

    for path in files:
        logger.info(f"✓ Wrote {path}")
    return 0


def cmd_partition2(args, logger) -> int:
    g = read_graph(args.graph)
    cfg = TwoBlockConfig(a=args.a, b=args.b, trim_factor=args.trim_factor,
                         correction_rounds=args.rounds)
    result = partition_two(g, args.a, args.b, args.seed, cfg)
    write_clustering(result, args.output)
    logger.info(f"✓ Wrote 2-clustering of {g.num_vertices} vertices to {args.output} "
                f"({len(result.trimmed)} trimmed)")
    return 0


def cmd_partitionk(args, logger) -> int:
    g = read_graph(args.graph)
    cfg = MultiConfig.from_rates(args.a, args.b, args.k, g.num_vertices, set_size=args.set_size)
    result = partition_multi(g, args.a, args.b, args.k, args.seed, cfg)
    write_clustering(result, args.output)
    logger.info(f"✓ Wrote {args.k}-clustering of {g.num_vertices} vertices to {args.output} "
                f"({len(result.trimmed)} trimmed)")
    return 0


def cmd_censor(args, logger) -> int:
    g, labels = read_censor_observations(args.observations)
    total = g.num_vertices
    p = args.p
    if p is None:
        p = 2 * g.edge_count / (total * (total - 1)) if total > 1 else 0.0
        logger.info(f"Estimated edge probability p = {p:.6g}")
    y = observation_matrix(g, labels)
    result = spectral_partition_censor(y, p, g, CensorConfig(degree=args.degree))
    write_clustering(result, args.output)
    logger.info(f"✓ Wrote 2-clustering of {total} vertices to {args.output}")
    return 0


def cmd_eval(args, logger) -> int:
    truth = read_clustering(args.truth, args.k)
    pred = read_clustering(args.pred, truth.k)
    report = gamma_correctness(pred, truth)
    print(format_output(report.to_dict(), args.format))
    return 0


def cmd_heatmap(args, logger) -> int:
    g = read_graph(args.graph)
    c = read_clustering(args.clustering)
    write_pgm(density_heatmap(g, c, args.bins), args.output)
    logger.info(f"✓ Wrote {args.bins}x{args.bins} heatmap to {args.output}")
    return 0


def cmd_experiment(args, logger) -> int:
    env = load_config()
    overrides = parse_overrides(args.overrides)
    if args.workers is not None:
        overrides['experiment.workers'] = str(args.workers)
    if args.output_dir is not None:
        overrides['experiment.output_dir'] = args.output_dir
    config = load_experiment_config(args.config, overrides, env)

    logger.info("=" * 60)
    logger.info("Experiment Configuration")
    logger.info("=" * 60)
    logger.info(f"Name:              {config.name}")
    logger.info(f"Pipeline:          {config.pipeline}")
    logger.info(f"Grid points:       {len(config.grid())}")
    logger.info(f"Trials per point:  {config.trials}")
    logger.info(f"Seeds:             {config.seed}..{config.seed + config.trials - 1}")
    logger.info(f"Workers:           {config.workers}")
    logger.info(f"Output directory:  {config.output_dir}")
    logger.info("=" * 60)

    if args.dry_run:
        logger.info("DRY RUN MODE: No trials will be run")
        print(format_output(config.to_dict(), args.format))
        return 0

    report = run_experiment(config)
    print(format_output(report.summary_rows(), args.format))
    return 0


COMMANDS = {
    'generate': cmd_generate,
    'partition2': cmd_partition2,
    'partitionk': cmd_partitionk,
    'censor': cmd_censor,
    'eval': cmd_eval,
    'heatmap': cmd_heatmap,
    'experiment': cmd_experiment,
}


def main(argv=None):
    """Main execution function."""
    args = parse_arguments(argv)

    try:
        env = load_config()
    except ValueError as e:
        setup_logger(ROOT_LOGGER).error(f"Configuration error: {e}")
        return 2

    # Setup logging
    log_level = 'DEBUG' if args.verbose else env['LOG_LEVEL']
    logger = setup_logger(ROOT_LOGGER, level=log_level)

    try:
        return COMMANDS[args.command](args, logger)

    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return 2

    except (RecoveryError, ValueError) as e:
        logger.error(str(e))
        return 1

    except OSError as e:
        logger.error(str(e))
        return 1

    except Exception as e:
        handle_error(e, logger)


if __name__ == '__main__':
    sys.exit(main())
