"""tests/test_config.py – unit tests for verifier.config"""

import json

import pytest

from shared.errors import IoError, UsageError
from verifier.config import RunConfig, build_config, describe, load_settings, parse_grid

ENV_VARS = ("PJL_DIGITS", "PJL_TOL", "PJL_WORKERS", "PJL_DB")


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for var in ENV_VARS:
        monkeypatch.delenv(var, raising=False)


@pytest.fixture
def settings(tmp_path):
    path = tmp_path / "settings.json"
    path.write_text(json.dumps({"digits": 45, "tol": 1e-9, "workers": 2}), encoding="utf-8")
    return path


def _flags(**kw):
    base = {"command": "moments", "config": None}
    base.update(kw)
    return base


# ---------------------------------------------------------------------------
# layering
# ---------------------------------------------------------------------------


def test_defaults_without_settings(tmp_path):
    config = build_config(_flags(), tmp_path / "absent.json")
    assert config == RunConfig(command="moments")


def test_settings_layer(settings):
    config = build_config(_flags(), settings)
    assert (config.digits, config.tol, config.workers) == (45, 1e-9, 2)


def test_environment_beats_settings(settings, monkeypatch):
    monkeypatch.setenv("PJL_DIGITS", "50")
    monkeypatch.setenv("PJL_DB", "runs.db")
    config = build_config(_flags(), settings)
    assert config.digits == 50
    assert config.db_path == "runs.db"
    assert config.tol == 1e-9


def test_config_file_then_flags(settings, tmp_path, monkeypatch):
    monkeypatch.setenv("PJL_DIGITS", "50")
    extra = tmp_path / "run.json"
    extra.write_text(json.dumps({"digits": 55, "alpha": 1.5, "grid": [0.5, 1.5, 4]}), encoding="utf-8")
    config = build_config(_flags(config=str(extra), digits=None, beta="0.3"), settings)
    assert config.digits == 55
    assert config.alpha == "1.5"
    assert config.beta == "0.3"
    assert config.grid == (0.5, 1.5, 4)
    config = build_config(_flags(config=str(extra), digits=40), settings)
    assert config.digits == 40


def test_unknown_keys_are_ignored(tmp_path):
    path = tmp_path / "settings.json"
    path.write_text(json.dumps({"theme": "dark", "n": 3}), encoding="utf-8")
    assert build_config(_flags(), path).n == 3


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "bad",
    [
        {"digits": 10},
        {"n_max": 0},
        {"n_max": 65},
        {"tol": 0.0},
        {"workers": 0},
        {"case": 5},
        {"alpha": "half"},
        {"command": "nope"},
        {"grid": "1:0.5:4"},
        {"grid": "0.5:1:1"},
        {"n": "three"},
    ],
)
def test_rejected_values(tmp_path, bad):
    with pytest.raises(UsageError):
        build_config(_flags(**bad), tmp_path / "absent.json")


def test_parse_grid():
    assert parse_grid(None) is None
    assert parse_grid("0.1:2:5") == (0.1, 2.0, 5)
    with pytest.raises(UsageError):
        parse_grid("0.1:2")
    with pytest.raises(UsageError):
        parse_grid("a:b:c")


def test_settings_files(tmp_path):
    assert load_settings(tmp_path / "absent.json") == {}
    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    with pytest.raises(UsageError):
        load_settings(broken)
    listing = tmp_path / "list.json"
    listing.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(UsageError):
        load_settings(listing)


def test_missing_config_file(tmp_path):
    with pytest.raises(IoError):
        build_config(_flags(config=str(tmp_path / "nope.json")), tmp_path / "absent.json")


def test_public_params_and_describe():
    config = RunConfig(command="fredholm", case=2, grid=(0.5, 1.0, 3))
    params = config.public_params()
    assert params["case"] == 2
    assert params["grid"] == [0.5, 1.0, 3]
    assert "db_path" not in params and "workers" not in params
    assert json.loads(describe(config))["command"] == "fredholm"
