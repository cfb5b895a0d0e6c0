import pytest
from pydantic import ValidationError

from app.core.config import Settings, settings
from app.models.fields import builtin_field
from app.operations import constructors as c
from app.operations.rationality import RationalityEngine


def test_default_settings():
    """Test the defaults every cap and modulus starts from."""
    s = Settings(_env_file=None)
    assert s.ORDER_CAP == 20000
    assert s.COHOMOLOGY_CAP == 72
    assert s.DEGREE_CAP == 5000
    assert s.CHAIN_DEPTH == 3
    assert (s.ZETA5_MODULUS, s.GPLUS_MODULUS, s.REP_MODULUS, s.OMEGA) == (11, 25, 73, 2)


def test_environment_overrides(monkeypatch):
    """Test that environment variables override the defaults."""
    monkeypatch.setenv("COHOMOLOGY_CAP", "120")
    monkeypatch.setenv("LOG_LEVEL", "DEBUG")
    s = Settings(_env_file=None)
    assert s.COHOMOLOGY_CAP == 120
    assert s.LOG_LEVEL == "DEBUG"


def test_invalid_environment_value(monkeypatch):
    """Test that a non-integer cap is rejected."""
    monkeypatch.setenv("ORDER_CAP", "many")
    with pytest.raises(ValidationError):
        Settings(_env_file=None)


def test_env_file(tmp_path, monkeypatch):
    """Test reading settings from a .env file."""
    env = tmp_path / ".env"
    env.write_text("CHAIN_DEPTH=5\nZETA5_MODULUS=31\n")
    monkeypatch.delenv("CHAIN_DEPTH", raising=False)
    s = Settings(_env_file=env)
    assert s.CHAIN_DEPTH == 5
    assert s.ZETA5_MODULUS == 31


def test_constructors_follow_settings(monkeypatch):
    """Test that the default field of the binary icosahedral group comes from settings."""
    monkeypatch.setattr(settings, "ZETA5_MODULUS", 31)
    assert c.binary_icosahedral().params["q"] == 31


def test_engine_depth_follows_settings(monkeypatch):
    """Test that the rule engine takes its chain depth from settings."""
    monkeypatch.setattr(settings, "CHAIN_DEPTH", 1)
    assert RationalityEngine(builtin_field("Q")).depth == 1
    assert RationalityEngine(builtin_field("Q"), depth=4).depth == 4
