"""Tests for YAML + environment configuration loading."""

import logging
import os

import pytest

from lehmancert import config as lc_config
from lehmancert.config import get, load_config, reset_config, set_config


@pytest.fixture
def isolated(monkeypatch, tmp_path):
    """Empty working directory without .env/config.yaml and no LEHMANCERT_* variables."""
    monkeypatch.chdir(tmp_path)
    for name in ("LEHMANCERT_ZEROS_FILE", "LEHMANCERT_STORE_DB", "LEHMANCERT_THREADS", "LEHMANCERT_CHUNK_SIZE"):
        monkeypatch.delenv(name, raising=False)
    return tmp_path


def test_defaults_without_config_file(isolated):
    config = load_config()
    assert config["certify"]["alpha"] == 1.34e11
    assert config["certify"]["variant"] == "refined"
    assert config["zero_sum"]["chunk_size"] == 65536
    assert config["catalog"]["path"] is None


def test_yaml_values_merge_over_defaults(isolated):
    path = isolated / "custom.yaml"
    path.write_text("certify:\n  eta: 1.2e-4\nscan:\n  points: 42\n", encoding="utf-8")
    config = load_config(str(path))
    assert config["certify"]["eta"] == pytest.approx(1.2e-4)
    assert config["certify"]["omega"] == 727.952018
    assert config["scan"]["points"] == 42
    assert config["scan"]["threshold"] == -0.16


def test_config_yaml_in_working_directory_is_found(isolated):
    (isolated / "config.yaml").write_text("oracle:\n  seed: 7\n", encoding="utf-8")
    assert load_config()["oracle"]["seed"] == 7


def test_explicit_missing_file_raises(isolated):
    with pytest.raises(FileNotFoundError):
        load_config(str(isolated / "nope.yaml"))


def test_invalid_yaml_raises_value_error(isolated):
    path = isolated / "bad.yaml"
    path.write_text("certify: [unclosed\n", encoding="utf-8")
    with pytest.raises(ValueError):
        load_config(str(path))


def test_non_mapping_file_raises(isolated):
    path = isolated / "list.yaml"
    path.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(ValueError, match="dictionary"):
        load_config(str(path))


def test_section_must_be_mapping(isolated):
    path = isolated / "section.yaml"
    path.write_text("certify: 3\n", encoding="utf-8")
    with pytest.raises(ValueError, match="certify"):
        load_config(str(path))


def test_empty_file_gives_defaults(isolated):
    path = isolated / "empty.yaml"
    path.write_text("", encoding="utf-8")
    assert load_config(str(path))["store"]["max_certificates"] == 10_000


def test_environment_overrides(isolated, monkeypatch):
    monkeypatch.setenv("LEHMANCERT_ZEROS_FILE", "/data/zeros.bin")
    monkeypatch.setenv("LEHMANCERT_STORE_DB", "/tmp/store.db")
    monkeypatch.setenv("LEHMANCERT_THREADS", "3")
    monkeypatch.setenv("LEHMANCERT_CHUNK_SIZE", "1024")
    config = load_config()
    assert config["catalog"]["path"] == "/data/zeros.bin"
    assert config["store"]["db_path"] == "/tmp/store.db"
    assert config["zero_sum"]["threads"] == 3
    assert config["zero_sum"]["chunk_size"] == 1024


def test_invalid_thread_count_is_ignored(isolated, monkeypatch, caplog):
    monkeypatch.setenv("LEHMANCERT_THREADS", "many")
    with caplog.at_level(logging.WARNING):
        config = load_config()
    assert config["zero_sum"]["threads"] == 0
    assert "LEHMANCERT_THREADS" in caplog.text


def test_env_file_is_loaded(isolated, monkeypatch):
    (isolated / ".env").write_text("LEHMANCERT_CHUNK_SIZE=4096\n", encoding="utf-8")
    try:
        config = load_config()
    finally:
        os.environ.pop("LEHMANCERT_CHUNK_SIZE", None)
    assert config["zero_sum"]["chunk_size"] == 4096


def test_get_dot_path_and_default():
    set_config({"certify": {"alpha": 5.0}})
    assert get("certify.alpha") == 5.0
    assert get("certify.missing", "fallback") == "fallback"
    assert get("nonexistent.key") is None


def test_reset_config_reloads_lazily(isolated):
    set_config({"certify": {"alpha": 5.0}})
    reset_config()
    assert lc_config.config is None
    assert get("certify.alpha") == 1.34e11
