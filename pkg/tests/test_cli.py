'''
End-to-end tests of the command-line entry point.
'''
import json
import os

import pandas as pd

from main import main
from src.utils.bootstrap import DEFAULT_CONFIG, load_config
from src.utils.io import write_dataset_csv

SMALL = ['--workers', '1', '--set', 'simulator.n=40', '--set', 'simulator.horizon=3']


def _reports(capsys):
    return [json.loads(line) for line in capsys.readouterr().out.splitlines() if line.strip()]


def _simulate(out_dir, *extra):
    return main([*SMALL, *extra, 'simulate', '--out-dir', str(out_dir)])


def test_simulate_shape_and_determinism(tmp_path):
    settings = ['--set', 'simulator.n=4', '--set', 'simulator.horizon=2', '--set', 'policy.alpha=0.25']
    assert main(['--workers', '1', *settings, 'simulate', '--out-dir', str(tmp_path / 'a')]) == 0
    assert main(['--workers', '1', *settings, 'simulate', '--out-dir', str(tmp_path / 'b')]) == 0
    first = tmp_path / 'a' / 'dataset_0000.csv'
    frame = pd.read_csv(first)
    assert frame.shape == (8, 6)
    assert first.read_bytes() == (tmp_path / 'b' / 'dataset_0000.csv').read_bytes()
    assert os.path.exists(tmp_path / 'a' / 'dataset_0000.meta.json')


def test_estimate_hand_dataset(tmp_path, capsys, hand_dataset):
    path = write_dataset_csv(hand_dataset, str(tmp_path / 'hand.csv'))
    assert main(['estimate', path, '--estimator', 'subgroup', '--level', '0.95']) == 0
    (report,) = _reports(capsys)
    assert report['estimator'] == 'subgroup'
    assert report['point'] == 3.0


def test_estimate_endpoints_and_truncation(tmp_path, capsys):
    assert _simulate(tmp_path) == 0
    path = str(tmp_path / 'dataset_0000.csv')
    capsys.readouterr()

    assert main(['estimate', path, '--estimator', 'subgroup', '--estimator', 'hybrid', '--weight', '0']) == 0
    subgroup, hybrid = _reports(capsys)
    assert hybrid['point'] == subgroup['point']
    assert hybrid['hybrid_weight'] == 0.0

    assert main(['estimate', path, '--estimator', 'base', '--truncate', '3']) == 0
    truncated = _reports(capsys)
    assert main(['estimate', path, '--estimator', 'base']) == 0
    assert truncated == _reports(capsys)


def test_compare_reports(tmp_path, capsys):
    first = tmp_path / 'first.json'
    second = tmp_path / 'second.json'
    first.write_text(json.dumps({'estimator': 'subgroup', 'point': 3.0, 'n': 100, 'alpha': 0.2, 'variance': 4.0}))
    second.write_text(json.dumps({'estimator': 'subgroup', 'point': 1.0, 'n': 100, 'alpha': 0.2, 'variance': 4.0}))
    assert main(['compare', str(first), str(second)]) == 0
    result = json.loads(capsys.readouterr().out)
    assert result['difference'] == 2.0
    assert abs(result['ci_low'] - 1.4457) < 1e-3
    assert abs(result['ci_high'] - 2.5543) < 1e-3


def test_exit_codes(tmp_path, capsys, hand_dataset):
    assert main(['--set', 'simulator.agents=4', 'simulate', '--out-dir', str(tmp_path)]) == 2
    assert capsys.readouterr().err.splitlines()[-1].startswith('error:')

    malformed = tmp_path / 'malformed.csv'
    malformed.write_text('agent_id,arm,index,treat_week,reward_t0\n0,policy,0.1,1,1\n1,policy,0.9,0,0,9\n')
    assert main(['estimate', str(malformed)]) == 2
    assert 'line 3' in capsys.readouterr().err

    treated_control = tmp_path / 'treated_control.csv'
    treated_control.write_text('agent_id,arm,index,treat_week,reward_t0\n'
                               '0,policy,0.1,1,1\n1,policy,0.9,0,0\n0,control,0.2,1,0\n1,control,0.8,0,1\n')
    assert main(['estimate', str(treated_control), '--alpha', '0.5']) == 3
    assert 'control_untreated' in capsys.readouterr().err

    # one treated agent leaves no order-statistic window for the hybrid weight
    path = write_dataset_csv(hand_dataset, str(tmp_path / 'hand.csv'))
    assert main(['estimate', path, '--estimator', 'hybrid']) == 4


def test_coverage_and_sweep_outputs(tmp_path):
    settings = [*SMALL, '--set', 'experiment.replicates=2', '--set', 'experiment.estimand_reps=3']
    assert main([*settings, 'coverage', '--out-dir', str(tmp_path)]) == 0
    coverage = pd.read_csv(tmp_path / 'coverage.csv')
    assert list(coverage['estimator']) == DEFAULT_CONFIG['experiment']['estimators']
    series = json.loads((tmp_path / 'coverage_series.json').read_text())
    assert set(series['series']) == set(DEFAULT_CONFIG['experiment']['estimators'])

    assert main([*settings, 'sweep', '--axis', 'level', '--values', '0.9', '0.95', '--out-dir', str(tmp_path)]) == 0
    rows = pd.read_csv(tmp_path / 'sweep.csv')
    assert len(rows) == 2 * len(DEFAULT_CONFIG['experiment']['estimators'])
    assert main([*settings, 'sweep', '--axis', 'level', '--out-dir', str(tmp_path)]) == 2


def test_corner_case_output(tmp_path):
    settings = ['--workers', '1', '--set', 'corner_case.n=40', '--set', 'corner_case.replicates=2']
    assert main([*settings, 'corner-case', '--out-dir', str(tmp_path)]) == 0
    rows = pd.read_csv(tmp_path / 'corner_case.csv')
    assert set(rows['estimator']) == {'base', 'subgroup', 'hybrid'}


def test_init_config(tmp_path):
    path = str(tmp_path / 'config.json')
    assert main(['init-config', path]) == 0
    assert load_config(path) == DEFAULT_CONFIG
    assert main(['init-config', path]) == 2
    assert main(['init-config', path, '--force']) == 0
