import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from ismcheck.config import get_settings  # noqa: E402


@pytest.fixture
def fresh_settings():
    """Clear the cached settings around a test that changes ISMPBT_* env vars"""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def report_db(tmp_path, monkeypatch, fresh_settings):
    db_path = tmp_path / "reports.db"
    monkeypatch.setenv("ISMPBT_DB_PATH", str(db_path))
    get_settings.cache_clear()
    return str(db_path)


def within_sigmas(count: int, total: int, p: float, sigmas: float) -> bool:
    """Binomial count within `sigmas` standard deviations of total * p"""
    mean = total * p
    sd = (total * p * (1 - p)) ** 0.5
    return abs(count - mean) <= sigmas * sd
