'''
Tests for configuration loading, overrides and worker resolution.
'''
import json

import pytest

from src.core.errors import ConfigurationError
from src.utils.bootstrap import (
    DEFAULT_CONFIG,
    apply_override,
    apply_overrides,
    load_config,
    parse_override_value,
    resolve_workers,
    save_config,
    validate_config,
)


def test_defaults_without_file():
    config = load_config(None)
    assert config == DEFAULT_CONFIG
    config['policy']['alpha'] = 0.5
    assert DEFAULT_CONFIG['policy']['alpha'] == 0.2


def test_partial_file_is_merged(tmp_path):
    path = tmp_path / 'config.json'
    path.write_text(json.dumps({'simulator': {'n': 300}, 'experiment': {'estimators': ['threshold']}}))
    config = load_config(str(path))
    assert config['simulator']['n'] == 300
    assert config['simulator']['horizon'] == DEFAULT_CONFIG['simulator']['horizon']
    assert config['experiment']['estimators'] == ['threshold']


def test_unknown_keys_are_rejected():
    with pytest.raises(ConfigurationError) as info:
        validate_config({'simulator': {'agents': 10}, 'plots': {}})
    assert 'simulator.agents' in str(info.value)
    assert 'plots' in str(info.value)
    with pytest.raises(ConfigurationError):
        validate_config({'policy': 0.2})


def test_free_form_sweep_section():
    config = validate_config({'experiment': {'sweep': {'axis': 'alpha', 'values': [0.1, 0.2]}}})
    assert config['experiment']['sweep']['values'] == [0.1, 0.2]


def test_bad_files(tmp_path):
    with pytest.raises(ConfigurationError):
        load_config(str(tmp_path / 'missing.json'))
    broken = tmp_path / 'broken.json'
    broken.write_text('{"simulator": ')
    with pytest.raises(ConfigurationError):
        load_config(str(broken))


def test_save_and_reload(tmp_path):
    path = str(tmp_path / 'nested' / 'config.json')
    save_config(DEFAULT_CONFIG, path)
    assert load_config(path) == DEFAULT_CONFIG


def test_overrides():
    config = load_config(None)
    apply_overrides(config, ['policy.alpha=0.1', 'experiment.estimators=["base"]', 'simulator.domain=tb'])
    assert config['policy']['alpha'] == 0.1
    assert config['experiment']['estimators'] == ['base']
    assert config['simulator']['domain'] == 'tb'
    assert parse_override_value('null') is None
    with pytest.raises(ConfigurationError):
        apply_override(config, 'policy.beta', 1)
    with pytest.raises(ConfigurationError):
        apply_override(config, 'policy', 1)
    with pytest.raises(ConfigurationError):
        apply_overrides(config, ['policy.alpha'])


def test_resolve_workers(monkeypatch):
    monkeypatch.delenv('POLICY_EVAL_WORKERS', raising=False)
    config = load_config(None)
    assert resolve_workers(3, config) == 3
    config['workers'] = 2
    assert resolve_workers(None, config) == 2
    monkeypatch.setenv('POLICY_EVAL_WORKERS', '5')
    assert resolve_workers(None, config) == 5
    with pytest.raises(ConfigurationError):
        resolve_workers(0, config)
    monkeypatch.setenv('POLICY_EVAL_WORKERS', 'many')
    with pytest.raises(ConfigurationError):
        resolve_workers(None, config)
