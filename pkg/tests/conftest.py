import random

import pytest
from mpmath import mp

from core import create_app
from core.addons.extensions import RunConfig


@pytest.fixture(autouse=True)
def lab_env(monkeypatch, tmp_path):
    """No log file, artifacts under the test's tmp dir"""
    monkeypatch.setenv('LAB_LOG_FILE', '')
    monkeypatch.setenv('LAB_OUT', str(tmp_path / 'results'))
    yield


@pytest.fixture(autouse=True)
def precision_guard():
    """mpmath keeps one global context; put it back after every test"""
    dps = mp.dps
    yield
    mp.dps = dps


@pytest.fixture
def rng():
    return random.Random(20240101)


@pytest.fixture
def small_config(tmp_path):
    return RunConfig.load(order_inert=6, order_split=6, order_ramified=8, workers=2,
                          out=str(tmp_path / 'results'), log_file='')


@pytest.fixture
def app():
    app = create_app()
    app.config['TESTING'] = True
    return app


@pytest.fixture
def client(app):
    return app.test_client()
