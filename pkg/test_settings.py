#!/usr/bin/env python3
"""
测试设置加载、环境变量覆盖与校验
"""

import pytest

from config.settings import Settings, check_environment, reload_settings, update_settings
from fixedpoint.errors import DomainError


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    for name in ("ENVIRONMENT", "LOG_LEVEL", "FIXPOINT_QUAD_RTOL", "FIXPOINT_STRATEGY", "FIXPOINT_FORMAT",
                 "FIXPOINT_EQUIV_C", "FIXPOINT_INDEX_TOL"):
        monkeypatch.delenv(name, raising=False)
    reload_settings()
    yield
    monkeypatch.undo()
    reload_settings()


def test_defaults_are_valid():
    settings = Settings()
    assert settings.validate() == (True, [])
    assert settings.environment == "production"
    assert settings.quadrature_config().rel_tol == 1e-8


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("FIXPOINT_QUAD_RTOL", "1e-10")
    monkeypatch.setenv("FIXPOINT_STRATEGY", "fast")
    monkeypatch.setenv("ENVIRONMENT", "development")
    settings = reload_settings()
    assert settings.quadrature.rel_tol == 1e-10
    assert settings.decision.strategy == "fast"
    assert settings.log_level == "DEBUG"


def test_invalid_values_are_reported(monkeypatch):
    monkeypatch.setenv("FIXPOINT_FORMAT", "xml")
    monkeypatch.setenv("FIXPOINT_INDEX_TOL", "0")
    reload_settings()
    report = check_environment()
    assert not report["valid"]
    assert len(report["errors"]) == 2
    assert report["environment_vars"]["FIXPOINT_FORMAT"] == "xml"


def test_update_settings_reaches_nested_sections():
    settings = update_settings(equivalence_ceiling=25.0, digits=12)
    assert settings.verify.equivalence_ceiling == 25.0
    assert settings.output.digits == 12
    assert settings.to_dict()["verify"]["equivalence_ceiling"] == 25.0


def test_quadrature_config_is_validated():
    settings = Settings()
    settings.quadrature.t_max = 0.5
    assert not settings.validate()[0]
    with pytest.raises(DomainError):
        settings.quadrature_config()


def test_dilation_step_must_divide_an_octave():
    settings = Settings()
    settings.grid.dilation_step = 0.5
    assert settings.validate()[0]
    settings.grid.dilation_step = 0.3
    valid, errors = settings.validate()
    assert not valid
    assert len(errors) == 1
