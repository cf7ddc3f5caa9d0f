from pathlib import Path

import pytest

from sumprod.config import SumprodConfig, get_config, set_config


def test_validate_required_raises_on_missing(monkeypatch):
    monkeypatch.delenv("SUMPROD_E2E_SEED", raising=False)

    with pytest.raises(ValueError) as excinfo:
        SumprodConfig.validate_required(["SUMPROD_E2E_SEED"])

    assert "SUMPROD_E2E_SEED" in str(excinfo.value)


def test_report_paths_resolve_under_out_dir(monkeypatch, tmp_path):
    monkeypatch.setenv("SUMPROD_OUT_DIR", str(tmp_path))
    cfg = SumprodConfig.from_env()

    assert cfg.report_path("energy.csv") == tmp_path / "energy.csv"
    assert cfg.report_path(tmp_path / "x" / "t.json") == tmp_path / "x" / "t.json"
    assert SumprodConfig().report_path("a.csv") == Path("reports") / "a.csv"


def test_from_env_reads_values(monkeypatch):
    monkeypatch.setenv("SUMPROD_THREADS", "4")
    monkeypatch.setenv("SUMPROD_LOG_LEVEL", "debug")
    monkeypatch.setenv("SUMPROD_TUPLE_GUARD", "1000")

    cfg = SumprodConfig.from_env()

    assert cfg.threads == 4
    assert cfg.log_level == "DEBUG"
    assert cfg.tuple_guard == 1000
    assert cfg.k_cap == 8


def test_from_env_rejects_non_integers(monkeypatch):
    monkeypatch.setenv("SUMPROD_K_CAP", "many")

    with pytest.raises(ValueError) as excinfo:
        SumprodConfig.from_env()

    assert "SUMPROD_K_CAP" in str(excinfo.value)


def test_threads_are_at_least_one(monkeypatch):
    monkeypatch.setenv("SUMPROD_THREADS", "0")
    assert SumprodConfig.from_env().threads == 1


def test_overrides_skip_none():
    cfg = SumprodConfig().with_overrides(threads=3, k_cap=None)
    assert cfg.threads == 3
    assert cfg.k_cap == 8
    assert cfg.as_dict()["threads"] == 3


def test_get_config_is_cached_until_reset(monkeypatch):
    first = get_config()
    monkeypatch.setenv("SUMPROD_DTIMES_CAP", "6")
    assert get_config() is first
    set_config(None)
    assert get_config().dtimes_cap == 6
