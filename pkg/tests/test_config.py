from fractions import Fraction
import csv
import io
import logging
from pathlib import Path

import pytest
from mpmath import mpf, mpc

from core.addons.errors import UsageError
from core.addons.extensions import RunConfig, read_config_file, setup_logging
from core.addons.functions import to_jsonable, rows_to_csv, parse_elem, parse_generators, parse_fraction
from core.models.quadfield import FieldElem

CONFIG_TEXT = """
# lab settings
[run]
precision = 40
order-split = 14   # below the default
primes = [3, 7]
format = "CSV"
"""


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / 'lab.toml'
    path.write_text(CONFIG_TEXT)
    return path


def test_read_config_file(config_file):
    assert read_config_file(config_file) == {
        'precision': '40', 'order_split': '14', 'primes': '3,7', 'format': 'CSV',
    }


def test_load_layers(config_file, monkeypatch):
    monkeypatch.setenv('LAB_SEED', '7')
    config = RunConfig.load(config_file)
    assert config.precision == 40
    assert config.order_split == 14
    assert config.primes == [3, 7]
    assert config.format == 'csv'
    assert config.seed == 7
    assert config.log_file == ''
    assert RunConfig.load(config_file, precision=50, seed=None).precision == 50


def test_invalid_configuration(tmp_path):
    with pytest.raises(UsageError):
        RunConfig.load(precision=10)
    with pytest.raises(UsageError):
        RunConfig.load(tmp_path / 'missing.toml')
    extra = tmp_path / 'extra.toml'
    extra.write_text("colour = red\n")
    with pytest.raises(UsageError):
        RunConfig.load(extra)
    broken = tmp_path / 'broken.toml'
    broken.write_text("precision 40\n")
    with pytest.raises(UsageError):
        RunConfig.load(broken)


def test_orders_below_minimum():
    config = RunConfig.load(order_split=6)
    assert config.below_minimum() == ['order_split']
    assert config.order_for('split') == 6
    assert RunConfig.load().below_minimum() == []


def test_override():
    config = RunConfig.load()
    assert config.override(seed=None) == config
    assert config.override(order_inert=8).order_inert == 8
    with pytest.raises(UsageError):
        config.override(workers=0)


def test_setup_logging_adds_one_file_handler(tmp_path):
    root = logging.getLogger()
    before = list(root.handlers)
    target = tmp_path / 'lab.log'
    setup_logging(target)
    logger = setup_logging(target)
    added = [h for h in root.handlers if h not in before and isinstance(h, logging.FileHandler)]
    try:
        assert logger.name == 'lab'
        assert len(added) == 1
        assert isinstance(added[0], logging.FileHandler)
    finally:
        for handler in added:
            root.removeHandler(handler)
            handler.close()


def test_to_jsonable():
    data = {
        'q': Fraction(3, 4),
        'x': FieldElem(1, 2, 3),
        'r': mpf('0.5'),
        'z': mpc(1, 2),
        'items': (1, None, True),
    }
    assert to_jsonable(data) == {
        'q': '3/4',
        'x': {'a': '1/1', 'b': '2/1', 'D': 3},
        'r': '0.5',
        'z': {'re': '1.0', 'im': '2.0'},
        'items': [1, None, True],
    }


def test_rows_to_csv():
    text = rows_to_csv([{'test': 'a', 'passed': True, 'detail': {'k': 1}}], ['test', 'passed', 'detail', 'residual'])
    rows = list(csv.reader(io.StringIO(text)))
    assert rows == [['test', 'passed', 'detail', 'residual'], ['a', 'True', '{"k": 1}', '']]


def test_parsers():
    assert parse_fraction(' 0.25 ') == Fraction(1, 4)
    with pytest.raises(ValueError):
        parse_fraction('1/0')
    assert parse_elem('1/2,3', 3) == FieldElem(Fraction(1, 2), 3, 3)
    assert parse_elem('5', 3) == FieldElem(5, 0, 3)
    with pytest.raises(ValueError):
        parse_elem('1,2,3', 3)
    assert parse_generators('1,0; 0,1', 3) == [FieldElem(1, 0, 3), FieldElem(0, 1, 3)]


def test_manifest_has_no_unused_pins():
    root = Path(__file__).resolve().parent.parent
    pins = {line.split('==')[0].lower() for line in (root / 'requirements.txt').read_text().splitlines() if line}
    assert {'mpmath', 'sympy', 'click', 'flask-openapi3', 'python-decouple'} <= pins
    assert 'colorama' not in pins
