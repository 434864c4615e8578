import json
import logging
import textwrap

import pytest

from harness.cli import main


@pytest.fixture(autouse=True)
def fresh_logger(monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    for key in ('LOG_LEVEL', 'SBM_WORKERS', 'SBM_OUTPUT_DIR'):
        monkeypatch.delenv(key, raising=False)
    logging.getLogger('sbm').handlers.clear()
    yield
    logging.getLogger('sbm').handlers.clear()


def json_output(capsys):
    out = capsys.readouterr().out
    return json.loads(out[out.index('{'):])


def generate(tmp_path, *args):
    return main(['generate', '--output-dir', str(tmp_path / 'inst'), *args])


def test_generate_partition_and_eval(tmp_path, capsys):
    assert generate(tmp_path, '--model', 'two', '--n', '100', '--a', '40', '--b', '4', '--seed', '2') == 0
    inst = tmp_path / 'inst'
    assert (inst / 'graph.txt').exists() and (inst / 'truth.txt').exists()

    pred = tmp_path / 'pred.txt'
    assert main(['partition2', '--graph', str(inst / 'graph.txt'), '--a', '40', '--b', '4',
                 '--seed', '2', '--output', str(pred)]) == 0
    capsys.readouterr()
    assert main(['eval', '--pred', str(pred), '--truth', str(inst / 'truth.txt'), '--format', 'json']) == 0
    report = json_output(capsys)
    assert report['gamma'] <= 0.15


def test_eval_truth_against_itself(tmp_path, capsys):
    truth = tmp_path / 'truth.txt'
    truth.write_text("0\n0\n1\n1 *\n")
    assert main(['eval', '--pred', str(truth), '--truth', str(truth), '--format', 'json']) == 0
    report = json_output(capsys)
    assert report['gamma'] == 0.0
    assert report['matching'] == [0, 1]


def test_partitionk(tmp_path, capsys):
    assert generate(tmp_path, '--model', 'k', '--n', '1200', '--k', '3', '--a', '300', '--b', '15',
                    '--seed', '1') == 0
    inst = tmp_path / 'inst'
    pred = tmp_path / 'pred.txt'
    assert main(['partitionk', '--graph', str(inst / 'graph.txt'), '--a', '300', '--b', '15', '--k', '3',
                 '--seed', '1', '--set-size', '180', '--output', str(pred)]) == 0
    capsys.readouterr()
    assert main(['eval', '--pred', str(pred), '--truth', str(inst / 'truth.txt'), '--k', '3',
                 '--format', 'json']) == 0
    assert json_output(capsys)['gamma'] <= 0.15


def test_censor_with_estimated_p(tmp_path, capsys):
    assert generate(tmp_path, '--model', 'censor', '--n', '200', '--p', '0.2', '--epsilon', '0.05') == 0
    inst = tmp_path / 'inst'
    pred = tmp_path / 'pred.txt'
    assert main(['censor', '--observations', str(inst / 'observations.txt'), '--output', str(pred)]) == 0
    assert 'Estimated edge probability' in capsys.readouterr().out
    assert main(['eval', '--pred', str(pred), '--truth', str(inst / 'truth.txt'), '--format', 'json']) == 0
    assert json_output(capsys)['gamma'] <= 0.15


def test_generate_censor_needs_rates(tmp_path):
    assert generate(tmp_path, '--model', 'censor', '--n', '10', '--p', '0.5') == 1


def test_generate_declines_overwrite(tmp_path, monkeypatch):
    assert generate(tmp_path, '--model', 'two', '--n', '10', '--a', '5', '--b', '1') == 0
    before = (tmp_path / 'inst' / 'graph.txt').read_text()
    monkeypatch.setattr('builtins.input', lambda _: 'n')
    assert generate(tmp_path, '--model', 'two', '--n', '10', '--a', '5', '--b', '1', '--seed', '9') == 0
    assert (tmp_path / 'inst' / 'graph.txt').read_text() == before


def test_heatmap(tmp_path):
    assert generate(tmp_path, '--model', 'two', '--n', '20', '--a', '10', '--b', '1') == 0
    out = tmp_path / 'map.pgm'
    assert main(['heatmap', '--graph', str(tmp_path / 'inst' / 'graph.txt'),
                 '--clustering', str(tmp_path / 'inst' / 'truth.txt'), '--bins', '4',
                 '--output', str(out)]) == 0
    assert out.read_text().startswith("P2\n4 4\n255\n")


def test_log_level_from_environment(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv('LOG_LEVEL', 'WARNING')
    assert generate(tmp_path, '--model', 'two', '--n', '10', '--a', '5', '--b', '1') == 0
    assert 'Wrote' not in capsys.readouterr().out


def test_invalid_worker_count_in_environment(tmp_path, monkeypatch):
    monkeypatch.setenv('SBM_WORKERS', 'many')
    assert generate(tmp_path, '--model', 'two', '--n', '10', '--a', '5', '--b', '1') == 2


def test_missing_graph_file(tmp_path):
    assert main(['partition2', '--graph', str(tmp_path / 'none.txt'), '--a', '5', '--b', '1',
                 '--output', str(tmp_path / 'p.txt')]) == 1


CONFIG = textwrap.dedent("""\
    [experiment]
    pipeline = twoblock
    trials = 2

    [model]
    n = 30
    a = 12
    b = 2
""")


def test_experiment_run(tmp_path, capsys):
    path = tmp_path / 'small.ini'
    path.write_text(CONFIG)
    out_dir = tmp_path / 'out'
    assert main(['experiment', str(path), '--output-dir', str(out_dir), '--format', 'json']) == 0
    assert (out_dir / 'report.jsonl').exists()
    assert 'Experiment Configuration' in capsys.readouterr().out


def test_experiment_dry_run(tmp_path, capsys):
    path = tmp_path / 'small.ini'
    path.write_text(CONFIG)
    assert main(['experiment', str(path), '--dry-run', '--set', 'experiment.trials=4',
                 '--format', 'json']) == 0
    resolved = json_output(capsys)
    assert resolved['trials'] == 4
    assert resolved['name'] == 'small'
    assert not (tmp_path / 'results').exists()


def test_experiment_bad_config_exits_2(tmp_path):
    path = tmp_path / 'bad.ini'
    path.write_text("[experiment]\npipeline = nowhere\n")
    assert main(['experiment', str(path)]) == 2


def test_experiment_bad_override_exits_1(tmp_path):
    path = tmp_path / 'small.ini'
    path.write_text(CONFIG)
    assert main(['experiment', str(path), '--set', 'trials=4']) == 1
