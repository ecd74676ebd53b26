import logging
import os

import pytest

from engine.esl import SolveOptions
from engine.settings import (
    DEFAULT_BRUTE_FORCE_LIMIT,
    DEFAULT_LOG_LEVEL,
    DEFAULT_VERIFY_LIMIT,
    ENV_PREFIX,
    Settings,
    load_settings,
)
from engine.sweep import SweepConfig

NAMES = [ENV_PREFIX + name for name in (
    "BRUTE_FORCE_LIMIT", "EXACT_SIMPLICITY_LIMIT", "VERIFY_LIMIT", "LOG_LEVEL",
)]


@pytest.fixture
def clean_env(monkeypatch, tmp_path):
    for name in NAMES:
        monkeypatch.delenv(name, raising=False)
    empty = tmp_path / "empty.env"
    empty.write_text("")
    yield empty
    # load_dotenv writes straight into os.environ
    for name in NAMES:
        os.environ.pop(name, None)


def test_defaults(clean_env):
    assert load_settings(clean_env) == Settings()


def test_environment(clean_env, monkeypatch):
    monkeypatch.setenv("ENERGY_VERIFY_LIMIT", "50")
    monkeypatch.setenv("ENERGY_LOG_LEVEL", "debug")
    settings = load_settings(clean_env)
    assert settings.verify_limit == 50
    assert settings.log_level == "DEBUG"


@pytest.mark.parametrize("raw", ["abc", "-5"])
def test_bad_values_fall_back(clean_env, monkeypatch, caplog, raw):
    monkeypatch.setenv("ENERGY_BRUTE_FORCE_LIMIT", raw)
    with caplog.at_level(logging.WARNING, logger="engine.settings"):
        settings = load_settings(clean_env)
    assert settings.brute_force_limit == DEFAULT_BRUTE_FORCE_LIMIT
    assert "ENERGY_BRUTE_FORCE_LIMIT" in caplog.text


def test_bad_log_level(clean_env, monkeypatch):
    monkeypatch.setenv("ENERGY_LOG_LEVEL", "chatty")
    assert load_settings(clean_env).log_level == DEFAULT_LOG_LEVEL


def test_env_file(clean_env, tmp_path):
    path = tmp_path / ".env"
    path.write_text("ENERGY_BRUTE_FORCE_LIMIT=123\nENERGY_VERIFY_LIMIT=7\n")
    settings = load_settings(path)
    assert settings.brute_force_limit == 123
    assert settings.verify_limit == 7


def test_environment_beats_env_file(clean_env, monkeypatch, tmp_path):
    path = tmp_path / ".env"
    path.write_text("ENERGY_VERIFY_LIMIT=7\n")
    monkeypatch.setenv("ENERGY_VERIFY_LIMIT", "9")
    assert load_settings(path).verify_limit == 9


def test_settings_flow_into_options():
    settings = Settings(brute_force_limit=10, exact_simplicity_limit=4, verify_limit=3)
    options = SolveOptions.from_settings(settings, auto_lift=True)
    assert (options.exact_simplicity_limit, options.verify_limit, options.auto_lift) == (4, 3, True)
    config = SweepConfig.from_settings(settings, family="tiny")
    assert (config.brute_force_limit, config.family) == (10, "tiny")
    assert SweepConfig().verify_limit == DEFAULT_VERIFY_LIMIT
