import logging

import pytest

from src.components.language import DEFAULT_CAP
from src.integrations import config
from src.integrations.config import Settings, load_settings


@pytest.fixture
def settings_file(tmp_path):
    def write(text):
        path = tmp_path / "settings.toml"
        path.write_text(text, encoding="utf-8")
        return str(path)
    return write


def test_defaults_without_file_or_env(tmp_path):
    # Act
    settings = load_settings(str(tmp_path / "missing.toml"), environ={})

    # Assert
    assert settings == Settings()
    assert settings.cap == DEFAULT_CAP
    assert settings.format == "tsv"


def test_file_values(settings_file):
    # Arrange
    path = settings_file('[workbench]\nCAP = 4096\nFORMAT = "json"\nOUT_DIR = "out"\n')

    # Act
    settings = load_settings(path, environ={})

    # Assert
    assert settings.cap == 4096
    assert settings.format == "json"
    assert settings.out_dir == "out"
    assert settings.n_max == 200


def test_environment_values(tmp_path):
    # Arrange
    environ = {"WORKBENCH_NMAX": "50", "WORKBENCH_TRUNCATION": "20"}

    # Act
    settings = load_settings(str(tmp_path / "missing.toml"), environ=environ)

    # Assert
    assert settings.n_max == 50
    assert settings.truncation == 20


def test_file_wins_over_environment(settings_file):
    # Arrange
    path = settings_file("[workbench]\nNMAX = 80\n")

    # Act
    settings = load_settings(path, environ={"WORKBENCH_NMAX": "50", "WORKBENCH_CAP": "1024"})

    # Assert
    assert settings.n_max == 80
    assert settings.cap == 1024


def test_os_environ_is_read(monkeypatch, tmp_path):
    # Arrange
    monkeypatch.setenv("WORKBENCH_GUARD_BITS", "96")

    # Act
    settings = load_settings(str(tmp_path / "missing.toml"))

    # Assert
    assert settings.guard_bits == 96


def test_bad_values_fall_back_to_defaults(settings_file, caplog):
    # Arrange
    path = settings_file('[workbench]\nCAP = "lots"\nINITIAL_WINDOW = 0\nFORMAT = "xml"\n')

    # Act
    with caplog.at_level(logging.WARNING, logger=config.__name__):
        settings = load_settings(path, environ={})

    # Assert
    assert settings.cap == DEFAULT_CAP
    assert settings.initial_window == Settings().initial_window
    assert settings.format == "tsv"
    assert "not an integer" in caplog.text
    assert "must be positive" in caplog.text


def test_malformed_file_is_ignored(settings_file, caplog):
    # Arrange
    path = settings_file("[workbench\nCAP = 12\n")

    # Act
    with caplog.at_level(logging.WARNING, logger=config.__name__):
        settings = load_settings(path, environ={})

    # Assert
    assert settings == Settings()
    assert "could not load" in caplog.text


def test_with_overrides_skips_none():
    # Act
    settings = Settings().with_overrides(cap=2048, out_dir=None, format="json")

    # Assert
    assert settings.cap == 2048
    assert settings.out_dir == "reports"
    assert settings.format == "json"


def test_policy_follows_settings():
    # Act
    policy = Settings(cap=4096, initial_window=64).policy()

    # Assert
    assert policy.cap == 4096
    assert policy.initial_window == 64
