import pytest

from divbound.config import Settings
from divbound.consts import LogBase
from divbound.errors import ValidationError


def test_defaults(monkeypatch):
    for var in vars(Settings.ENV):
        if not var.startswith("_"):
            monkeypatch.delenv(getattr(Settings.ENV, var), raising=False)

    res = Settings.from_env()
    assert res == Settings()
    assert res.log_base is LogBase.e


def test_env_and_overrides(monkeypatch):
    monkeypatch.setenv("DIVBOUND_SEED", "7")
    monkeypatch.setenv("DIVBOUND_LOG_BASE", "2")

    res = Settings.from_env()
    assert res.seed == 7
    assert res.log_base is LogBase.two

    res = Settings.from_env(seed=3, log_base="10")
    assert res.seed == 3
    assert res.log_base is LogBase.ten


def test_bad_env(monkeypatch):
    monkeypatch.setenv("DIVBOUND_GRID", "lots")
    with pytest.raises(ValidationError) as exc:
        Settings.from_env()
    assert "DIVBOUND_GRID" in str(exc.value)


@pytest.mark.parametrize(
    "kwargs", [dict(seed=-1), dict(tol=0.0), dict(tol_inv=-1e-12), dict(grid_size=10)]
)
def test_rejects(kwargs):
    with pytest.raises(ValidationError):
        Settings(**kwargs)


def test_replace():
    res = Settings().replace(seed=9)
    assert res.seed == 9
    assert res.tol == Settings().tol


def test_log_base_factor():
    assert LogBase.e.factor == 1.0
    assert LogBase.two.factor == pytest.approx(1.4426950408889634)
